#include "cranklab/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cranklab {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_floor(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (r < 0) r += abs(b);
  return r;
}

long mod_floor(long a, long b) {
  long r = a % b;
  return r < 0 ? r + (b < 0 ? -b : b) : r;
}

Int rat_floor(const Rat& x) { return floor_div(x.get_num(), x.get_den()); }

Int rat_ceil(const Rat& x) { return -floor_div(-x.get_num(), x.get_den()); }

Rat rat_frac(const Rat& x0) {
  // callers may pass Rat(a, b) straight from the two-argument constructor
  Rat x = x0;
  x.canonicalize();
  return x - Rat(rat_floor(x));
}

Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t += c;
  if (t.empty()) throw std::invalid_argument("empty rational");
  if (t[0] == '+') t.erase(0, 1);
  Rat r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& x) { return x.get_str(); }

long inverse_mod(long a, long m) {
  long g = m, x = 0, x1 = 1, r = mod_floor(a, m);
  while (r != 0) {
    long q = g / r;
    long t = g - q * r;
    g = r;
    r = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::invalid_argument("no inverse modulo " + std::to_string(m));
  return mod_floor(x, m);
}

// ---------------------------------------------------------------- CycNum

CycNum::CycNum(int p) : p_(p), num_(p > 0 ? p - 1 : 0), den_(1) {
  if (p < 3) throw std::invalid_argument("CycNum needs an odd prime p >= 3");
}

CycNum::CycNum(int p, const Rat& value) : CycNum(p) {
  num_[0] = value.get_num();
  den_ = value.get_den();
}

CycNum CycNum::zeta_pow(int p, long k) {
  CycNum z(p);
  long e = mod_floor(k, p);
  if (e == p - 1) {
    for (auto& c : z.num_) c = -1;
  } else {
    z.num_[e] = 1;
  }
  return z;
}

CycNum CycNum::from_coords(int p, const std::vector<Rat>& coords) {
  CycNum z(p);
  if (static_cast<int>(coords.size()) > p) throw std::invalid_argument("too many coordinates");
  Int den = 1;
  for (const auto& c : coords) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> g(p);
  for (size_t i = 0; i < coords.size(); ++i) g[i] = coords[i].get_num() * (den / coords[i].get_den());
  return from_group_ring(p, g, den);
}

CycNum CycNum::from_group_ring(int p, const std::vector<Int>& c, const Int& den) {
  if (static_cast<int>(c.size()) != p) throw std::invalid_argument("group ring vector must have length p");
  if (den == 0) throw std::domain_error("zero denominator");
  CycNum z(p);
  for (int i = 0; i < p - 1; ++i) z.num_[i] = c[i] - c[p - 1];
  z.den_ = den;
  if (den < 0) {
    z.den_ = -den;
    for (auto& v : z.num_) v = -v;
  }
  z.normalize();
  return z;
}

void CycNum::normalize() {
  if (den_ == 1) return;
  Int g = den_;
  for (const auto& v : num_) {
    if (g == 1) break;
    if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (is_zero()) {
    den_ = 1;
    return;
  }
  if (g != 1) {
    for (auto& v : num_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

void CycNum::check_same(const CycNum& o) const {
  if (p_ != o.p_ || p_ == 0)
    throw std::invalid_argument("CycNum field mismatch: p=" + std::to_string(p_) + " vs p=" + std::to_string(o.p_));
}

Rat CycNum::coord(int i) const {
  Rat r(num_.at(i), den_);
  r.canonicalize();
  return r;
}

std::vector<Rat> CycNum::coords() const {
  std::vector<Rat> out;
  out.reserve(num_.size());
  for (size_t i = 0; i < num_.size(); ++i) out.push_back(coord(static_cast<int>(i)));
  return out;
}

bool CycNum::is_zero() const {
  for (const auto& v : num_)
    if (v != 0) return false;
  return true;
}

bool CycNum::is_rational() const {
  for (size_t i = 1; i < num_.size(); ++i)
    if (num_[i] != 0) return false;
  return true;
}

Rat CycNum::rational_value() const {
  if (!is_rational()) throw std::domain_error("CycNum is not rational: " + str());
  return coord(0);
}

std::vector<Int> CycNum::group_ring() const {
  std::vector<Int> g(p_);
  for (int i = 0; i < p_ - 1; ++i) g[i] = num_[i];
  return g;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  check_same(o);
  if (den_ == o.den_) {
    for (size_t i = 0; i < num_.size(); ++i) num_[i] += o.num_[i];
  } else {
    for (size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * o.den_ + o.num_[i] * den_;
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
  check_same(o);
  if (den_ == o.den_) {
    for (size_t i = 0; i < num_.size(); ++i) num_[i] -= o.num_[i];
  } else {
    for (size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * o.den_ - o.num_[i] * den_;
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

CycNum& CycNum::operator*=(const CycNum& o) {
  check_same(o);
  const int n = p_ - 1;
  if (o.is_rational()) {
    for (auto& v : num_) v *= o.num_[0];
  } else if (is_rational()) {
    Int c = num_[0];
    for (int i = 0; i < n; ++i) num_[i] = c * o.num_[i];
  } else {
    std::vector<Int> r(p_);
    for (int i = 0; i < n; ++i) {
      if (num_[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (o.num_[j] == 0) continue;
        int k = (i + j) % p_;
        mpz_addmul(r[k].get_mpz_t(), num_[i].get_mpz_t(), o.num_[j].get_mpz_t());
      }
    }
    for (int i = 0; i < n; ++i) num_[i] = r[i] - r[n];
  }
  den_ *= o.den_;
  normalize();
  return *this;
}

CycNum& CycNum::operator/=(const CycNum& o) { return *this *= o.inv(); }

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& v : r.num_) v = -v;
  return r;
}

CycNum CycNum::scaled(const Rat& r) const {
  CycNum out = *this;
  for (auto& v : out.num_) v *= r.get_num();
  out.den_ *= r.get_den();
  out.normalize();
  return out;
}

CycNum CycNum::inv() const {
  if (p_ == 0 || is_zero()) throw std::domain_error("division by zero in Q(zeta_p)");
  if (is_rational()) return CycNum(p_, Rat(den_, num_[0]));
  // a^{-1} = prod_{d != 1} sigma_d(a) / N(a)
  CycNum prod(p_, Rat(1));
  for (long d = 2; d < p_; ++d) prod *= galois(d);
  CycNum norm = prod * *this;
  return prod.scaled(1 / norm.rational_value());
}

CycNum CycNum::galois(long d) const {
  long dd = mod_floor(d, p_);
  if (dd == 0) throw std::invalid_argument("galois: d must be prime to p");
  std::vector<Int> g(p_);
  for (int i = 0; i < p_ - 1; ++i) g[(static_cast<long>(i) * dd) % p_] = num_[i];
  return from_group_ring(p_, g, den_);
}

CycNum CycNum::times_zeta(long k) const {
  long s = mod_floor(k, p_);
  if (s == 0) return *this;
  std::vector<Int> g(p_);
  for (int i = 0; i < p_ - 1; ++i) g[(i + s) % p_] = num_[i];
  return from_group_ring(p_, g, den_);
}

std::complex<double> CycNum::embed(long r) const {
  std::complex<double> acc = 0;
  const double tau = 2 * std::numbers::pi;
  for (int i = 0; i < p_ - 1; ++i) {
    if (num_[i] == 0) continue;
    double c = coord(i).get_d();
    long e = mod_floor(static_cast<long>(i) * r, p_);
    acc += c * std::polar(1.0, tau * static_cast<double>(e) / p_);
  }
  return acc;
}

std::string CycNum::str() const {
  if (p_ == 0) return "<unset>";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < p_ - 1; ++i) {
    Rat c = coord(i);
    if (c == 0) continue;
    bool neg = c < 0;
    Rat a = abs(c);
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (i == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "zeta";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) return "0";
  return os.str();
}

bool operator==(const CycNum& a, const CycNum& b) {
  return a.p_ == b.p_ && a.den_ == b.den_ && a.num_ == b.num_;
}

CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }

CycNum cyc_add(const CycNum& a, const CycNum& b) { return a + b; }
CycNum cyc_mul(const CycNum& a, const CycNum& b) { return a * b; }
CycNum cyc_neg(const CycNum& a) { return -a; }
bool cyc_is_zero(const CycNum& a) { return a.is_zero(); }
CycNum cyc_inv(const CycNum& a) { return a.inv(); }
CycNum galois(const CycNum& a, long d) { return a.galois(d); }

CycNum half_power(int p, long j) {
  if (p % 2 == 0) throw std::invalid_argument("half_power needs odd p");
  Int e = mod_floor(Int(j) * ((p + 1) / 2), Int(p));
  return CycNum::zeta_pow(p, e.get_si());
}

CycNum sin_ratio(int p, long d) {
  if (d < 1 || d > p - 1) throw std::invalid_argument("sin_ratio: d must lie in 1..p-1");
  // e^{pi i (d-1)/p} (1 - zeta) / (1 - zeta^d), with e^{pi i/p} = -zeta^{(p+1)/2}
  CycNum one(p, Rat(1));
  CycNum num = (one - CycNum::zeta_pow(p, 1)) * half_power(p, d - 1);
  if ((d - 1) % 2 != 0) num = -num;
  return num / (one - CycNum::zeta_pow(p, d));
}

// ---------------------------------------------------------------- Phase

Phase::Phase(const Rat& t) : t_(rat_frac(t)) {}

Phase& Phase::operator*=(const Phase& o) {
  t_ = rat_frac(t_ + o.t_);
  return *this;
}

std::string Phase::str() const { return "e(" + t_.get_str() + ")"; }

Phase phase_mul(const Phase& a, const Phase& b) { return a * b; }

std::optional<CycNum> phase_to_cyc(const Phase& a, int p) {
  Rat u = a.t() * (2 * p);
  if (u.get_den() != 1) return std::nullopt;
  long k = u.get_num().get_si();
  if (k % 2 == 0) return CycNum::zeta_pow(p, k / 2);
  // e^{pi i k/p} = -e^{pi i (k+p)/p}
  return -CycNum::zeta_pow(p, (k + p) / 2);
}

std::complex<double> phase_to_float(const Phase& a) {
  return std::polar(1.0, 2 * std::numbers::pi * a.t().get_d());
}

}  // namespace cranklab
