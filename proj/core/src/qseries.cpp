#include "cranklab/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cranklab/dense.hpp"

namespace cranklab {

namespace {

long lcm_l(long a, long b) {
  long g = std::gcd(a, b);
  __int128 r = static_cast<__int128>(a / g) * b;
  if (r > (static_cast<__int128>(1) << 62)) throw std::overflow_error("exponent denominator overflow");
  return static_cast<long>(r);
}

long scaled_of(const Rat& r, long D) {
  Int s = r.get_num() * D;
  if (!mpz_divisible_p(s.get_mpz_t(), r.get_den_mpz_t()))
    throw std::invalid_argument("exponent " + r.get_str() + " is not on the 1/" + std::to_string(D) + " lattice");
  s /= r.get_den();
  if (!s.fits_slong_p()) throw std::overflow_error("scaled exponent overflow");
  return s.get_si();
}

long den_of(const Rat& r) {
  if (!r.get_den().fits_slong_p()) throw std::overflow_error("denominator overflow");
  return r.get_den().get_si();
}

void check_field(const QSeries& a, const QSeries& b) {
  if (a.p() != b.p()) throw std::invalid_argument("series over different fields");
}

}  // namespace

QSeries::QSeries(int p, long D, long trunc_scaled) : p_(p), D_(D), trunc_(trunc_scaled) {
  if (D < 1) throw std::invalid_argument("exponent denominator must be positive");
}

QSeries QSeries::zero(int p, const Rat& trunc) {
  long D = den_of(trunc);
  return QSeries(p, D, scaled_of(trunc, D));
}

QSeries QSeries::monomial(const CycNum& c, const Rat& e, const Rat& trunc) {
  long D = lcm_l(den_of(e), den_of(trunc));
  QSeries s(c.p(), D, scaled_of(trunc, D));
  if (e < trunc && !c.is_zero()) s.terms_.emplace(scaled_of(e, D), c);
  return s;
}

Rat QSeries::trunc() const {
  Rat r(trunc_, D_);
  r.canonicalize();
  return r;
}

Rat QSeries::exponent(long scaled) const {
  Rat r(scaled, D_);
  r.canonicalize();
  return r;
}

void QSeries::add_scaled(long e, const CycNum& c) {
  if (e >= trunc_) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void QSeries::add_term(const Rat& e, const CycNum& c) { add_scaled(scaled_of(e, D_), c); }

CycNum QSeries::coeff(const Rat& r) const {
  if (r >= trunc())
    throw std::out_of_range("coefficient at q^" + r.get_str() + " lies beyond truncation q^" + trunc().get_str());
  Int s = r.get_num() * D_;
  if (!mpz_divisible_p(s.get_mpz_t(), r.get_den_mpz_t())) return CycNum(p_);
  s /= r.get_den();
  auto it = terms_.find(s.get_si());
  return it == terms_.end() ? CycNum(p_) : it->second;
}

std::optional<Rat> QSeries::lead_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return exponent(terms_.begin()->first);
}

QSeries QSeries::rescaled(long newD) const {
  if (newD % D_ != 0) throw std::invalid_argument("rescale target must be a multiple of D");
  long k = newD / D_;
  QSeries out(p_, newD, trunc_ * k);
  for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e * k, c);
  return out;
}

QSeries QSeries::truncated(const Rat& t) const {
  long D = lcm_l(D_, den_of(t));
  QSeries out = rescaled(D);
  long ts = scaled_of(t, D);
  if (ts >= out.trunc_) return out;
  out.trunc_ = ts;
  out.terms_.erase(out.terms_.lower_bound(ts), out.terms_.end());
  return out;
}

bool QSeries::is_rational() const {
  for (const auto& [e, c] : terms_)
    if (!c.is_rational()) return false;
  return true;
}

QSeries& QSeries::operator+=(const QSeries& o) {
  check_field(*this, o);
  long D = lcm_l(D_, o.D_);
  if (D != D_) *this = rescaled(D);
  QSeries b = o.D_ == D ? o : o.rescaled(D);
  trunc_ = std::min(trunc_, b.trunc_);
  terms_.erase(terms_.lower_bound(trunc_), terms_.end());
  for (const auto& [e, c] : b.terms_) add_scaled(e, c);
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& o) { return *this += -o; }

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
QSeries operator*(const QSeries& a, const QSeries& b) { return qs_mul(a, b); }

QSeries qs_add(const QSeries& a, const QSeries& b) { return a + b; }
QSeries qs_sub(const QSeries& a, const QSeries& b) { return a - b; }
QSeries qs_neg(const QSeries& a) { return -a; }

QSeries qs_mul(const QSeries& a0, const QSeries& b0) {
  check_field(a0, b0);
  const int p = a0.p();
  long D = lcm_l(a0.D(), b0.D());
  QSeries a = a0.D() == D ? a0 : a0.rescaled(D);
  QSeries b = b0.D() == D ? b0 : b0.rescaled(D);
  long la = a.empty() ? a.trunc_scaled() : a.terms().begin()->first;
  long lb = b.empty() ? b.trunc_scaled() : b.terms().begin()->first;
  long trunc = std::min(a.trunc_scaled() + lb, b.trunc_scaled() + la);
  QSeries out(p, D, trunc);
  if (a.empty() || b.empty()) return out;

  long g = 0;
  for (const auto& [e, c] : a.terms()) g = std::gcd(g, e - la);
  for (const auto& [e, c] : b.terms()) g = std::gcd(g, e - lb);
  if (g == 0) g = 1;
  long base = la + lb;
  if (trunc <= base) return out;
  long len = (trunc - base + g - 1) / g;

  bool integral = true;
  for (const auto& [e, c] : a.terms()) integral = integral && c.is_integral();
  for (const auto& [e, c] : b.terms()) integral = integral && c.is_integral();

  if (integral) {
    std::vector<Int> acc(static_cast<size_t>(len) * p);
    for (const auto& [ea, ca] : a.terms()) {
      const auto& na = ca.numerators();
      bool ra = ca.is_rational();
      for (const auto& [eb, cb] : b.terms()) {
        long e = ea + eb;
        if (e >= trunc) break;
        Int* dst = &acc[static_cast<size_t>((e - base) / g) * p];
        const auto& nb = cb.numerators();
        if (ra) {
          for (int j = 0; j < p - 1; ++j)
            if (nb[j] != 0) mpz_addmul(dst[j].get_mpz_t(), na[0].get_mpz_t(), nb[j].get_mpz_t());
        } else if (cb.is_rational()) {
          for (int i = 0; i < p - 1; ++i)
            if (na[i] != 0) mpz_addmul(dst[i].get_mpz_t(), na[i].get_mpz_t(), nb[0].get_mpz_t());
        } else {
          for (int i = 0; i < p - 1; ++i) {
            if (na[i] == 0) continue;
            for (int j = 0; j < p - 1; ++j) {
              if (nb[j] == 0) continue;
              mpz_addmul(dst[(i + j) % p].get_mpz_t(), na[i].get_mpz_t(), nb[j].get_mpz_t());
            }
          }
        }
      }
    }
    std::vector<Int> v(p);
    for (long i = 0; i < len; ++i) {
      bool nz = false;
      for (int j = 0; j < p; ++j) {
        v[j] = acc[static_cast<size_t>(i) * p + j];
        nz = nz || v[j] != 0;
      }
      if (!nz) continue;
      CycNum c = CycNum::from_group_ring(p, v);
      if (!c.is_zero()) out.add_scaled(base + i * g, c);
    }
    return out;
  }

  std::vector<std::optional<CycNum>> acc(len);
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      long e = ea + eb;
      if (e >= trunc) break;
      auto& slot = acc[(e - base) / g];
      if (slot) *slot += ca * cb;
      else slot = ca * cb;
    }
  }
  for (long i = 0; i < len; ++i)
    if (acc[i] && !acc[i]->is_zero()) out.add_scaled(base + i * g, *acc[i]);
  return out;
}

QSeries qs_scale(const QSeries& a, const CycNum& c) {
  QSeries out(a.p(), a.D(), a.trunc_scaled());
  if (c.is_zero()) return out;
  for (const auto& [e, v] : a.terms()) out.add_scaled(e, v * c);
  return out;
}

QSeries qs_shift(const QSeries& a, const Rat& r) {
  long D = lcm_l(a.D(), den_of(r));
  QSeries b = a.rescaled(D);
  long s = scaled_of(r, D);
  QSeries out(a.p(), D, b.trunc_scaled() + s);
  for (const auto& [e, c] : b.terms()) out.add_scaled(e + s, c);
  return out;
}

QSeries qs_dilate(const QSeries& a, long k) {
  if (k < 1) throw std::invalid_argument("dilation factor must be positive");
  QSeries out(a.p(), a.D(), a.trunc_scaled() * k);
  for (const auto& [e, c] : a.terms()) out.add_scaled(e * k, c);
  return out;
}

QSeries qs_inv(const QSeries& a) {
  if (a.empty()) throw std::domain_error("cannot invert a series with no known leading coefficient");
  const int p = a.p();
  long e0 = a.terms().begin()->first;
  CycNum c0inv = a.terms().begin()->second.inv();
  long g = 0;
  for (const auto& [e, c] : a.terms()) g = std::gcd(g, e - e0);
  if (g == 0) g = a.D();
  // b = 1/(1 + u) with u on the lattice g, valid below trunc - e0
  long rel = a.trunc_scaled() - e0;
  long len = (rel + g - 1) / g;
  std::vector<std::pair<long, CycNum>> u;
  for (const auto& [e, c] : a.terms())
    if (e != e0) u.emplace_back((e - e0) / g, c * c0inv);
  std::vector<CycNum> b(len, CycNum(p));
  if (len > 0) b[0] = CycNum(p, Rat(1));
  for (long n = 1; n < len; ++n) {
    CycNum s(p);
    for (const auto& [k, c] : u) {
      if (k > n) break;
      if (!b[n - k].is_zero()) s -= c * b[n - k];
    }
    b[n] = s;
  }
  QSeries out(p, a.D(), rel - e0);
  for (long n = 0; n < len; ++n)
    if (!b[n].is_zero()) out.add_scaled(n * g - e0, b[n] * c0inv);
  return out;
}

QSeries qs_pow(const QSeries& a, long n) {
  if (n < 0) return qs_pow(qs_inv(a), -n);
  if (n == 0) {
    Rat lead = a.empty() ? Rat(0) : *a.lead_exponent();
    return QSeries::monomial(CycNum(a.p(), Rat(1)), Rat(0), a.trunc() - lead);
  }
  std::optional<QSeries> result;
  QSeries base = a;
  while (n > 0) {
    if (n & 1) result = result ? qs_mul(*result, base) : base;
    n >>= 1;
    if (n) base = qs_mul(base, base);
  }
  return *result;
}

CycNum qs_coeff(const QSeries& f, const Rat& r) { return f.coeff(r); }

std::optional<Rat> qs_first_difference(const QSeries& f, const QSeries& g, const Rat& r) {
  if (r > f.trunc() || r > g.trunc())
    throw std::out_of_range("comparison order " + r.get_str() + " exceeds truncation");
  QSeries d = f - g;
  for (const auto& [e, c] : d.terms()) {
    Rat x = d.exponent(e);
    if (x >= r) break;
    return x;
  }
  return std::nullopt;
}

bool qs_eq_to_order(const QSeries& f, const QSeries& g, const Rat& r) {
  return !qs_first_difference(f, g, r).has_value();
}

std::string qs_dump(const QSeries& f) {
  std::ostringstream os;
  for (const auto& [e, c] : f.terms()) {
    os << f.exponent(e).get_str() << "\t[";
    auto cs = c.coords();
    for (size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << cs[i].get_str();
    os << "]\n";
  }
  return os.str();
}

Rat bernoulli_p2(const Rat& t) {
  Rat x = rat_frac(t);
  return x * x - x + Rat(1, 6);
}

// ---------------------------------------------------------------- atoms

EtaAtom EtaAtom::eta(long delta) {
  if (delta < 1) throw std::invalid_argument("eta scale must be positive");
  return EtaAtom{AtomKind::Eta, 1, 0, 0, delta};
}

EtaAtom EtaAtom::f(long N, long rho, long delta) {
  if (N < 2 || delta < 1) throw std::invalid_argument("bad f atom");
  long r = mod_floor(rho, N);
  if (r == 0) throw std::invalid_argument("f_{N,rho} needs rho not divisible by N");
  r = std::min(r, N - r);
  return EtaAtom{AtomKind::F, N, r, 0, delta};
}

EtaAtom EtaAtom::geta(long N, long k, long delta) {
  if (N < 2 || delta < 1) throw std::invalid_argument("bad generalized eta atom");
  long r = mod_floor(k, N);
  if (r == 0) throw std::invalid_argument("eta_{N,k} needs k not divisible by N");
  r = std::min(r, N - r);
  return EtaAtom{AtomKind::Geta, N, r, 0, delta};
}

EtaAtom EtaAtom::E(long N, long g, long h, long delta) {
  if (N < 2 || delta < 1) throw std::invalid_argument("bad E atom");
  if (mod_floor(g, N) == 0 && mod_floor(h, N) == 0) throw std::invalid_argument("E_{g,h} needs (g,h) not both 0 mod N");
  return EtaAtom{AtomKind::E, N, g, h, delta};
}

std::pair<EtaAtom, Phase> reduce_E(long N, long g, long h, long delta) {
  long g0 = mod_floor(g, N);
  long t = (g - g0) / N;
  // E_{g0 + tN, h} = (-zeta^{-h})^t E_{g0, h}
  Rat u = Rat(t) * (Rat(1, 2) - Rat(h, N));
  return {EtaAtom::E(N, g0, mod_floor(h, N), delta), Phase(u)};
}

Rat EtaAtom::lead_exponent() const {
  switch (kind) {
    case AtomKind::Eta:
      return Rat(delta, 24);
    case AtomKind::F: {
      Rat r((N - 2 * a) * (N - 2 * a), 8 * N);
      r.canonicalize();
      return r * delta;
    }
    case AtomKind::Geta: {
      Rat r(a, N);
      r.canonicalize();
      return Rat(N, 2) * bernoulli_p2(r) * delta;
    }
    case AtomKind::E: {
      Rat r(mod_floor(a, N), N);
      r.canonicalize();
      return bernoulli_p2(r) / 2 * delta;
    }
  }
  return 0;
}

std::string EtaAtom::str() const {
  std::ostringstream os;
  std::string arg = delta == 1 ? "z" : std::to_string(delta) + "z";
  switch (kind) {
    case AtomKind::Eta: os << "eta(" << arg << ")"; break;
    case AtomKind::F: os << "f[" << N << "," << a << "](" << arg << ")"; break;
    case AtomKind::Geta: os << "eta[" << N << "," << a << "](" << arg << ")"; break;
    case AtomKind::E: os << "E" << N << "[" << a << "," << b << "](" << arg << ")"; break;
  }
  return os.str();
}

EtaProduct::EtaProduct(std::initializer_list<std::pair<EtaAtom, long>> fs) {
  for (const auto& [a, n] : fs) mul(a, n);
}

void EtaProduct::mul(const EtaAtom& a, long n) {
  if (n == 0) return;
  auto it = std::lower_bound(factors.begin(), factors.end(), a,
                             [](const auto& x, const EtaAtom& y) { return x.first < y; });
  if (it != factors.end() && it->first == a) {
    it->second += n;
    if (it->second == 0) factors.erase(it);
  } else {
    factors.insert(it, {a, n});
  }
}

EtaProduct& EtaProduct::operator*=(const EtaProduct& o) {
  for (const auto& [a, n] : o.factors) mul(a, n);
  if (o.scalar) scalar = scalar ? *scalar * *o.scalar : *o.scalar;
  return *this;
}

EtaProduct operator*(EtaProduct a, const EtaProduct& b) { return a *= b; }

EtaProduct EtaProduct::pow(long n) const {
  EtaProduct r;
  for (const auto& [a, e] : factors) r.mul(a, e * n);
  if (scalar && n != 0) {
    CycNum s(scalar->p(), Rat(1));
    CycNum b = n < 0 ? scalar->inv() : *scalar;
    for (long i = 0; i < std::labs(n); ++i) s *= b;
    r.scalar = s;
  }
  return r;
}

Rat EtaProduct::lead_exponent() const {
  Rat s = 0;
  for (const auto& [a, n] : factors) s += a.lead_exponent() * n;
  return s;
}

Rat EtaProduct::weight() const {
  Rat w = 0;
  for (const auto& [a, n] : factors)
    if (a.kind == AtomKind::Eta || a.kind == AtomKind::F) w += Rat(n, 2);
  w.canonicalize();
  return w;
}

std::string EtaProduct::str() const {
  std::ostringstream os;
  if (scalar) os << "(" << scalar->str() << ")";
  bool first = !scalar;
  for (const auto& [a, n] : factors) {
    if (!first) os << " ";
    os << a.str();
    if (n != 1) os << "^" << n;
    first = false;
  }
  if (first) return "1";
  return os.str();
}

// ---------------------------------------------------------------- expansions

QSeries eta_series(long delta, const Rat& trunc, int p) {
  if (delta < 1) throw std::invalid_argument("eta scale must be positive");
  long D = lcm_l(24, den_of(trunc));
  QSeries out(p, D, scaled_of(trunc, D));
  // pentagonal numbers k(3k-1)/2, k in Z, with sign (-1)^k
  long lead = delta * D / 24;
  for (long k = 0;; ++k) {
    bool any = false;
    for (long kk : {k, -k - 1}) {
      long pent = kk * (3 * kk - 1) / 2;
      long e = lead + delta * D * pent;
      if (e < out.trunc_scaled()) {
        out.add_scaled(e, CycNum(p, Rat((kk % 2 == 0) ? 1 : -1)));
        any = true;
      }
    }
    if (!any) break;
  }
  return out;
}

QSeries atom_series(const EtaAtom& a, const Rat& trunc, int p) {
  if (a.kind == AtomKind::Eta) return eta_series(a.delta, trunc, p);
  return product_series(EtaProduct{{a, 1}}, trunc, p);
}

QSeries geta_series(long N, long k, const Rat& trunc, int p, long delta) {
  return atom_series(EtaAtom::geta(N, k, delta), trunc, p);
}

QSeries f_series(long N, long rho, const Rat& trunc, int p, long delta) {
  return atom_series(EtaAtom::f(N, rho, delta), trunc, p);
}

QSeries E_series(int p, long g, long h, const Rat& trunc, long delta) {
  return atom_series(EtaAtom::E(p, g, h, delta), trunc, p);
}

QSeries product_series(const EtaProduct& F, const Rat& trunc, int p) {
  Rat lead = 0;
  std::optional<CycNum> scalar = F.scalar;
  std::vector<std::pair<EtaAtom, long>> atoms;
  for (const auto& [a, n] : F.factors) {
    if (a.kind == AtomKind::E) {
      auto [r, u] = reduce_E(a.N, a.a, a.b, a.delta);
      if (mod_floor(r.b, r.N) != 0 && r.N != p)
        throw std::invalid_argument("E atom of level " + std::to_string(r.N) + " has coefficients outside Q(zeta_" +
                                    std::to_string(p) + ")");
      if (!u.is_one()) {
        auto c = phase_to_cyc(u.pow(n), p);
        if (!c) throw std::invalid_argument("E reduction factor not in Q(zeta_p)");
        scalar = scalar ? *scalar * *c : *c;
      }
      atoms.emplace_back(r, n);
    } else {
      atoms.emplace_back(a, n);
    }
  }
  for (const auto& [a, n] : atoms) lead += a.lead_exponent() * n;
  if (trunc <= lead) {
    long D = lcm_l(den_of(trunc), den_of(lead));
    return QSeries(p, D, scaled_of(trunc, D));
  }
  Rat bound = trunc - lead;
  std::vector<BinomialFactor> fs;
  for (const auto& [a, n] : atoms) atom_factors(a, n, bound, fs);
  return expand_product(p, lead, fs, trunc, scalar);
}

}  // namespace cranklab
