#include "cranklab/verifier.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cranklab/parallel.hpp"
#include "cranklab/partitions.hpp"

namespace cranklab {

long eta_quotient_power(int p) { return 24 / std::gcd(p - 1, 24); }

long kpower_of(const IdentitySpec& s) { return s.kpower != 0 ? s.kpower : eta_quotient_power(s.p); }

EtaProduct term_product(const IdentitySpec& s, const IdentityTerm& t) {
  EtaProduct F = s.prefactor;
  F.scalar.reset();
  long w = kpower_of(s) * t.k;
  F.mul(EtaAtom::eta(s.p), w);
  F.mul(EtaAtom::eta(1), -w);
  F *= j_product(t.nvec, t.r);
  return F;
}

QSeries term_series(const IdentitySpec& s, const IdentityTerm& t, const Rat& trunc) {
  return product_series(term_product(s, t), trunc, s.p);
}

QSeries lhs_series(const IdentitySpec& s, const Rat& trunc) {
  long T = rat_ceil(trunc).get_si() + 1;
  if (T < 1) T = 1;
  return K_combinatorial(s.p, s.m, s.ell, T).series.truncated(trunc);
}

QSeries rhs_series(const IdentitySpec& s, const Rat& trunc) {
  std::vector<QSeries> parts(s.terms.size());
  parallel_for(s.terms.size(), [&](size_t i) {
    const auto& t = s.terms[i];
    if (t.coeff && !t.coeff->is_zero()) parts[i] = qs_scale(term_series(s, t, trunc), *t.coeff);
  });
  QSeries sum = QSeries::zero(s.p, trunc);
  for (const auto& q : parts)
    if (q.p() != 0) sum += q;
  return sum;
}

// ---------------------------------------------------------------- modularity

ModularityResult modularity_check(int p, int m, const EtaVector& n) {
  if (n.p != p) throw std::invalid_argument("eta vector belongs to a different prime");
  ModularityResult r;
  long s = 0, sq = 0;
  for (size_t k = 1; k < n.n.size(); ++k) {
    s += n.n[k];
    sq += static_cast<long>(k * k) * n.n[k];
  }
  r.weight_sum = n.n[0] + s;
  r.mod24 = n.n[0] + 3 * s;
  r.quad = sq;
  r.quad_mod_p = mod_floor(sq, static_cast<long>(p));
  r.pass = r.weight_sum == 2 && mod_floor(r.mod24, 24L) == 0 && r.quad_mod_p == mod_floor(2L * m, static_cast<long>(p));
  return r;
}

EtaVector fold_term(const IdentitySpec& s, const IdentityTerm& t) {
  const int p = s.p;
  const long h = (p - 1) / 2;
  std::vector<long> n(h + 1, 0);
  auto add_f = [&](long rho, long e) {
    long r = mod_floor(rho, static_cast<long>(p));
    if (r == 0) throw std::invalid_argument("f_{p,0} is not an admissible factor");
    n[r <= h ? r : p - r] += e;
  };
  for (const auto& [a, e] : term_product(s, t).factors) {
    switch (a.kind) {
      case AtomKind::Eta:
        if (a.delta == p) {
          n[0] += e;
        } else if (a.delta == 1) {
          // eta(z) = prod_k f_{p,k}(z) / eta(pz)^{(p-3)/2}
          for (long k = 1; k <= h; ++k) n[k] += e;
          n[0] -= e * (p - 3) / 2;
        } else {
          throw std::invalid_argument("eta(" + std::to_string(a.delta) + "z) has no eta-vector form");
        }
        break;
      case AtomKind::F:
        if (a.N != p || a.delta != 1) throw std::invalid_argument("f atom of another level");
        add_f(a.a, e);
        break;
      case AtomKind::Geta:
        if (a.N != p || a.delta != 1) throw std::invalid_argument("eta_{N,k} atom of another level");
        add_f(a.a, e);
        n[0] -= e;
        break;
      case AtomKind::E:
        throw std::invalid_argument("E atoms have no eta-vector form");
    }
  }
  return EtaVector(p, n);
}

// ---------------------------------------------------------------- cusps

std::vector<Cusp> cusps(int p) {
  std::vector<Cusp> out{Cusp::infinity(), Cusp(0, 1)};
  for (long n = 2; n <= (p - 1) / 2; ++n) out.emplace_back(1, n);
  for (long n = 2; n <= (p - 1) / 2; ++n) out.emplace_back(n, p);
  return out;
}

long fan_width(int p, const Cusp& c) {
  if (c.c == 0 || mod_floor(c.c, Int(p)) == 0) return 1;
  return p;
}

long index_gamma1(int p) { return (static_cast<long>(p) * p - 1) / 2; }

Rat k_lower_bound(int p, const Cusp& c) {
  const long h = (p - 1) / 2;
  if (c.c == 1 && c.a == 0) {
    if (p == 11) return 0;
    Rat r(-(p - 1) * (p - 11), 24 * p);
    r.canonicalize();
    return r;
  }
  if (c.a == 1 && c.c >= 2 && c.c <= h) {
    long n = c.c.get_si();
    Rat r = -Rat(1, 2 * p) * (Rat(static_cast<long>(p) * p - 1, 12) + n * (n - p));
    return std::min(r, Rat(0));
  }
  if (c.c == p && c.a >= 2 && c.a <= h) {
    Rat r(static_cast<long>(p) * p - 1, 24 * p);
    r.canonicalize();
    return r;
  }
  throw std::invalid_argument("k_lower_bound: " + c.str() + " is not in the cusp list");
}

namespace {

std::string term_label(const IdentitySpec& s, const IdentityTerm& t) {
  std::string out = "j(" + std::to_string(s.p) + ",pi_" + std::to_string(t.r) + "(";
  for (size_t i = 0; i < t.nvec.n.size(); ++i) out += (i ? "," : "") + std::to_string(t.nvec.n[i]);
  out += "))";
  if (t.k != 0) out += "*(eta(" + std::to_string(s.p) + "z)/eta(z))^" + std::to_string(kpower_of(s) * t.k);
  if (!s.prefactor.factors.empty()) out = s.prefactor.str() + "*" + out;
  return out;
}

// ord(term; cusp) for every term and cusp
std::vector<std::vector<Rat>> raw_orders(const IdentitySpec& s, const std::vector<Cusp>& cs) {
  std::vector<std::vector<Rat>> ord(s.terms.size(), std::vector<Rat>(cs.size()));
  parallel_for(s.terms.size(), [&](size_t i) {
    EtaProduct F = term_product(s, s.terms[i]);
    for (size_t j = 0; j < cs.size(); ++j) ord[i][j] = ord_at_cusp(F, cs[j]);
  });
  return ord;
}

bool nonzero_coeff(const IdentityTerm& t) { return t.coeff && !t.coeff->is_zero(); }

}  // namespace

OrdTable ord_table(const IdentitySpec& s) { return ord_table(s, std::nullopt); }

OrdTable ord_table(const IdentitySpec& s, std::optional<size_t> divide_by) {
  OrdTable T;
  T.cusps = cusps(s.p);
  for (const auto& c : T.cusps) T.widths.push_back(fan_width(s.p, c));
  auto ord = raw_orders(s, T.cusps);
  for (size_t i = 0; i < s.terms.size(); ++i) {
    T.rows.push_back(term_label(s, s.terms[i]) + (divide_by ? "/j0" : ""));
    std::vector<Rat> row;
    for (size_t j = 0; j < T.cusps.size(); ++j) {
      Rat o = ord[i][j];
      if (divide_by) o -= ord[*divide_by][j];
      row.push_back(o * T.widths[j]);
    }
    T.ORD.push_back(row);
  }
  return T;
}

CuspOrder rhs_order_at_cusp(const IdentitySpec& s, const Cusp& c, const Rat& depth) {
  CuspOrder out{c, Rat(0), std::nullopt, Rat(0)};
  const Matrix2 A = c.matrix();
  std::vector<std::pair<const IdentityTerm*, EtaProduct>> live;
  std::optional<Rat> lo;
  for (const auto& t : s.terms) {
    if (!nonzero_coeff(t)) continue;
    EtaProduct F = term_product(s, t);
    Rat o = ord_at_matrix(F, A);
    if (!lo || o < *lo) lo = o;
    live.emplace_back(&t, std::move(F));
  }
  if (!lo) return out;
  out.term_min = *lo;
  out.checked_to = *lo + depth;
  std::vector<MatrixExpansion> ex(live.size());
  parallel_for(live.size(), [&](size_t i) { ex[i] = expand_at_matrix(live[i].second, A, s.p, out.checked_to); });
  // every term is written relative to the phase and p-power of the first one
  QSeries sum = QSeries::zero(s.p, out.checked_to);
  for (size_t i = 0; i < live.size(); ++i) {
    auto u = phase_to_cyc(ex[i].phase * ex[0].phase.inv(), s.p);
    if (!u) throw std::domain_error("terms of " + s.name + " carry incompatible phases at " + c.str());
    Rat dp = ex[i].p_power - ex[0].p_power;
    if (dp.get_den() != 1) throw std::domain_error("terms of " + s.name + " differ by a half power of p at " + c.str());
    Rat scale = 1;
    for (long k = 0; k < std::labs(dp.get_num().get_si()); ++k) scale *= s.p;
    if (dp < 0) scale = 1 / scale;
    sum += qs_scale(ex[i].series, (*u * *live[i].first->coeff).scaled(scale));
  }
  out.order = sum.lead_exponent();
  return out;
}

// ---------------------------------------------------------------- certificates

ValenceCertificate valence_certificate(const IdentitySpec& s, long margin) {
  ValenceCertificate cert;
  cert.name = s.name;
  cert.p = s.p;
  cert.m = s.m;
  cert.index = index_gamma1(s.p);
  const auto cs = cusps(s.p);
  auto ord = raw_orders(s, cs);

  bool divide = s.m != 0;
  if (divide) {
    for (size_t i = 0; i < s.terms.size(); ++i) {
      if (!nonzero_coeff(s.terms[i])) continue;
      if (!cert.j0 || ord[i][0] < ord[*cert.j0][0]) cert.j0 = i;
    }
    if (!cert.j0) throw std::invalid_argument("identity for m != 0 has no nonzero term to divide by");
    cert.j0_order = ord[*cert.j0][0];
  }
  cert.weight = divide ? Rat(0) : Rat(s.weight);
  cert.target = cert.weight * cert.index / 12;

  cert.B = 0;
  for (size_t j = 1; j < cs.size(); ++j) {
    CuspBound b;
    b.cusp = cs[j];
    b.width = fan_width(s.p, cs[j]);
    Rat shift = divide ? ord[*cert.j0][j] : Rat(0);
    b.lhs_exact = (k_lower_bound(s.p, cs[j]) - shift) * b.width;
    b.lhs = rat_ceil(b.lhs_exact);
    b.bound = b.lhs;
    for (size_t i = 0; i < s.terms.size(); ++i) {
      Rat o = (ord[i][j] - shift) * b.width;
      if (!b.rhs || o < *b.rhs) b.rhs = o;
    }
    if (b.rhs) b.bound = std::min(b.bound, rat_ceil(*b.rhs));
    cert.B += b.bound;
    cert.cusps.push_back(b);
  }
  cert.required = rat_floor(cert.target - Rat(cert.B)) + 1;
  cert.vanish_below = Rat(cert.required) + cert.j0_order;
  cert.checked_to = cert.vanish_below + margin;

  QSeries lhs = lhs_series(s, cert.checked_to);
  QSeries rhs = rhs_series(s, cert.checked_to);
  cert.first_nonzero = qs_first_difference(lhs, rhs, cert.vanish_below);
  cert.verified = !cert.first_nonzero;
  return cert;
}

// ---------------------------------------------------------------- fitting

namespace {

bool is_zero_s(const Rat& x) { return x == 0; }
bool is_zero_s(const CycNum& x) { return x.is_zero(); }

// Incremental echelon form.  Each row holds n coefficient entries followed
// by the right-hand sides.  Pivot rows are normalized and have zeros in the
// pivot columns of every earlier pivot.
template <class S>
struct Echelon {
  size_t n;
  std::vector<size_t> pivot_col;
  std::vector<std::vector<S>> rows;

  explicit Echelon(size_t n_) : n(n_) {}

  // returns false if the row reduces to 0 = nonzero
  bool add(std::vector<S> row) {
    for (size_t j = 0; j < rows.size(); ++j) {
      const S f = row[pivot_col[j]];
      if (is_zero_s(f)) continue;
      const auto& P = rows[j];
      for (size_t c = 0; c < row.size(); ++c)
        if (!is_zero_s(P[c])) row[c] -= f * P[c];
    }
    size_t c = 0;
    while (c < n && is_zero_s(row[c])) ++c;
    if (c == n) {
      for (size_t k = n; k < row.size(); ++k)
        if (!is_zero_s(row[k])) return false;
      return true;
    }
    const S inv = S(row[c]);
    for (auto& x : row)
      if (!is_zero_s(x)) x /= inv;
    pivot_col.push_back(c);
    rows.push_back(std::move(row));
    return true;
  }

  // solution for right-hand side column rc, free variables zero
  std::vector<S> solve(size_t rc, const S& zero) const {
    std::vector<S> x(n, zero);
    for (size_t j = rows.size(); j-- > 0;) {
      const auto& P = rows[j];
      S v = P[n + rc];
      for (size_t c = 0; c < n; ++c)
        if (c != pivot_col[j] && !is_zero_s(P[c]) && !is_zero_s(x[c])) v -= P[c] * x[c];
      x[pivot_col[j]] = v;
    }
    return x;
  }
};

std::vector<long> fit_exponents(const std::vector<QSeries>& basis, const QSeries& target, const Rat& order, long& D) {
  D = target.D();
  for (const auto& b : basis) D = std::lcm(D, b.D());
  auto check = [&](const QSeries& f) {
    if (f.trunc() < order) throw std::invalid_argument("fit order " + rat_str(order) + " exceeds a series truncation");
  };
  check(target);
  for (const auto& b : basis) check(b);
  std::vector<long> ex;
  auto collect = [&](const QSeries& f) {
    long scale = D / f.D();
    for (const auto& [e, c] : f.terms())
      if (Rat(e, f.D()) < order) ex.push_back(e * scale);
  };
  collect(target);
  for (const auto& b : basis) collect(b);
  std::sort(ex.begin(), ex.end());
  ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
  return ex;
}

}  // namespace

FitResult fit_coefficients_field(int p, const std::vector<QSeries>& basis, const QSeries& target, const Rat& order) {
  long D;
  auto ex = fit_exponents(basis, target, order, D);
  const size_t n = basis.size();
  const CycNum zero(p);
  Echelon<CycNum> E(n);
  FitResult res;
  res.consistent = true;
  for (long e : ex) {
    Rat r(e, D);
    r.canonicalize();
    std::vector<CycNum> row(n + 1, zero);
    for (size_t i = 0; i < n; ++i) row[i] = basis[i].coeff(r);
    row[n] = target.coeff(r);
    ++res.equations;
    if (!E.add(std::move(row))) {
      res.consistent = false;
      res.first_failure = r;
      break;
    }
  }
  res.nullity = static_cast<long>(n - E.rows.size());
  if (res.consistent) res.coeffs = E.solve(0, zero);
  return res;
}

FitResult fit_coefficients(int p, const std::vector<QSeries>& basis, const QSeries& target, const Rat& order) {
  for (const auto& b : basis)
    if (!b.is_rational()) return fit_coefficients_field(p, basis, target, order);
  long D;
  auto ex = fit_exponents(basis, target, order, D);
  const size_t n = basis.size();
  const size_t k = static_cast<size_t>(p - 1);
  Echelon<Rat> E(n);
  FitResult res;
  res.rational_path = true;
  res.consistent = true;
  for (long e : ex) {
    Rat r(e, D);
    r.canonicalize();
    std::vector<Rat> row(n + k);
    for (size_t i = 0; i < n; ++i) row[i] = basis[i].coeff(r).rational_value();
    auto t = target.coeff(r).coords();
    for (size_t j = 0; j < k; ++j) row[n + j] = t[j];
    ++res.equations;
    if (!E.add(std::move(row))) {
      res.consistent = false;
      res.first_failure = r;
      break;
    }
  }
  res.nullity = static_cast<long>(n - E.rows.size());
  if (!res.consistent) return res;
  std::vector<std::vector<Rat>> cols;
  for (size_t j = 0; j < k; ++j) cols.push_back(E.solve(j, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> c(k);
    for (size_t j = 0; j < k; ++j) c[j] = cols[j][i];
    res.coeffs.push_back(CycNum::from_coords(p, c));
  }
  return res;
}

long series_rank(const std::vector<QSeries>& basis, const Rat& order) {
  if (basis.empty()) return 0;
  const int p = basis.front().p();
  QSeries zero = QSeries::zero(p, order);
  for (const auto& b : basis)
    if (!b.is_rational()) return static_cast<long>(basis.size()) - fit_coefficients_field(p, basis, zero, order).nullity;
  return static_cast<long>(basis.size()) - fit_coefficients(p, basis, zero, order).nullity;
}

FitResult fit_spec(IdentitySpec& s, const Rat& order) {
  std::vector<QSeries> basis(s.terms.size());
  parallel_for(s.terms.size(), [&](size_t i) { basis[i] = term_series(s, s.terms[i], order); });
  QSeries target = lhs_series(s, order);
  FitResult r = fit_coefficients(s.p, basis, target, order);
  if (r.consistent)
    for (size_t i = 0; i < s.terms.size(); ++i) s.terms[i].coeff = r.coeffs[i];
  return r;
}

// ---------------------------------------------------------------- symmetry

bool SymmetryReport::consistent() const {
  if (!independent) return false;
  for (const auto& s : signs)
    if (s.w == 0 || s.w != s.w_formula) return false;
  return true;
}

long L_exponent(const EtaVector& n, long a, long b, long d, int p) {
  long s1 = 0, s2 = 0;
  for (size_t k = 1; k < n.n.size(); ++k) {
    long kk = static_cast<long>(k);
    s1 += kk * n.n[k];
    s2 += (floor_div(Int(d * kk * a), Int(p)).get_si() + floor_div(Int(d * kk), Int(p)).get_si()) * n.n[k];
  }
  return b * d * (1 + a) * s1 + s2;
}

SymmetryReport symmetry_check_K0(const IdentitySpec& s, const Rat& independence_order) {
  SymmetryReport rep;
  std::vector<QSeries> basis(s.terms.size());
  parallel_for(s.terms.size(), [&](size_t i) { basis[i] = term_series(s, s.terms[i], independence_order); });
  rep.rank = series_rank(basis, independence_order);
  rep.independent = rep.rank == static_cast<long>(s.terms.size());
  if (!rep.independent) return rep;

  std::vector<std::vector<long>> vecs;
  std::map<std::pair<size_t, long>, std::map<long, CycNum>> groups;
  for (const auto& t : s.terms) {
    auto it = std::find(vecs.begin(), vecs.end(), t.nvec.n);
    size_t vi = static_cast<size_t>(it - vecs.begin());
    if (it == vecs.end()) vecs.push_back(t.nvec.n);
    groups[{vi, t.k}][t.r] = t.coeff ? *t.coeff : CycNum(s.p);
  }
  const long h = (s.p - 1) / 2;
  for (const auto& [key, byr] : groups) {
    if (static_cast<long>(byr.size()) != h || !byr.count(1))
      throw std::invalid_argument("symmetry check needs every r = 1..(p-1)/2 for each vector and power");
    const CycNum& c1 = byr.at(1);
    EtaVector nv(s.p, vecs[key.first]);
    for (const auto& [r, cr] : byr) {
      SymmetrySign sg;
      sg.r = r;
      sg.vector_index = static_cast<long>(key.first) + 1;
      sg.k = key.second;
      CycNum S = sin_ratio(s.p, r) * galois(c1, r);
      if (cr == S) sg.w = 1;
      else if (cr == -S) sg.w = -1;
      long a = inverse_mod(r, s.p);
      long b = (a * r - 1) / s.p;
      long L = L_exponent(nv, a, b, r, s.p);
      sg.w_formula = mod_floor(r + 1 + L, 2L) == 0 ? 1 : -1;
      rep.signs.push_back(sg);
    }
  }
  return rep;
}

Gamma0Report gamma0_symmetry_check(const IdentitySpec& source, const IdentitySpec& image, const Matrix2& A) {
  const int p = source.p;
  if (image.p != p) throw std::invalid_argument("identities for different primes");
  if (A.c != p) throw std::invalid_argument("the symmetry needs A = (a k; p d)");
  Gamma0Report rep;
  rep.a = mod_floor(A.a, Int(p)).get_si();
  rep.d = mod_floor(A.d, Int(p)).get_si();
  rep.k = A.b.get_si();
  if (rep.a == 0 || rep.d == 0) throw std::invalid_argument("a and d must be units mod p");
  rep.m_image = mod_floor(static_cast<long>(source.m) * rep.a * rep.a, static_cast<long>(p));
  if (image.m != rep.m_image)
    throw std::invalid_argument("image identity must be for m = " + std::to_string(rep.m_image));
  rep.expected = sin_ratio(p, rep.d) * CycNum::zeta_pow(p, source.m * rep.a * rep.k);
  if (rep.d % 2 == 0) rep.expected = -rep.expected;

  using Key = std::vector<std::pair<EtaAtom, long>>;
  std::map<Key, CycNum> src, img;
  for (const auto& t : source.terms) {
    if (!nonzero_coeff(t)) continue;
    SlashResult R = slash_product(term_product(source, t), A);
    auto u = phase_to_cyc(R.phase, p);
    if (!u) return rep;
    auto& slot = src.try_emplace(R.target.factors, CycNum(p)).first->second;
    slot += *t.coeff * *u;
  }
  for (const auto& t : image.terms) {
    if (!nonzero_coeff(t)) continue;
    auto& slot = img.try_emplace(term_product(image, t).factors, CycNum(p)).first->second;
    slot += galois(*t.coeff, rep.d);
  }
  std::erase_if(src, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(img, [](const auto& kv) { return kv.second.is_zero(); });
  if (img.empty() || src.size() != img.size()) return rep;
  CycNum ratio = src.begin()->second / img.begin()->second;
  rep.targets_match = true;
  for (const auto& [key, c] : img) {
    auto it = src.find(key);
    if (it == src.end() || !(it->second == ratio * c)) {
      rep.targets_match = false;
      break;
    }
  }
  if (rep.targets_match) rep.observed = ratio;
  rep.verified = rep.targets_match && ratio == rep.expected;
  return rep;
}

// ---------------------------------------------------------------- series identities

SeriesCheck check_series_identity(const SeriesIdentity& s, const Rat& order) {
  SeriesCheck out;
  out.order = order;
  Rat need = order - s.shift;
  long T = rat_ceil(need).get_si() + 1;
  QSeries lhs = qs_shift(crank_series(s.p, s.ell, std::max(T, 1L)), s.shift).truncated(order);
  QSeries rhs = QSeries::zero(s.p, order);
  for (const auto& [c, F] : s.terms) rhs += qs_scale(product_series(F, order, s.p), c);
  out.first_difference = qs_first_difference(lhs, rhs, order);
  return out;
}

}  // namespace cranklab
