#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace cranklab {

using Int = mpz_class;
using Rat = mpq_class;

Int floor_div(const Int& a, const Int& b);
Int mod_floor(const Int& a, const Int& b);
long mod_floor(long a, long b);
Int rat_floor(const Rat& x);
Int rat_ceil(const Rat& x);
Rat rat_frac(const Rat& x);
Rat parse_rat(const std::string& s);
std::string rat_str(const Rat& x);
long inverse_mod(long a, long m);

// Element of Q(zeta_p), zeta_p = exp(2 pi i / p), stored in the reduced
// basis 1, zeta, ..., zeta^(p-2) as integer numerators over a common
// positive denominator.
class CycNum {
 public:
  CycNum() = default;
  explicit CycNum(int p);
  CycNum(int p, const Rat& value);
  CycNum(int p, long value) : CycNum(p, Rat(value)) {}

  static CycNum zeta_pow(int p, long k);
  static CycNum from_coords(int p, const std::vector<Rat>& coords);
  // c has length p and holds the coefficients of 1, zeta, ..., zeta^(p-1).
  static CycNum from_group_ring(int p, const std::vector<Int>& c, const Int& den = 1);

  int p() const { return p_; }
  int dim() const { return p_ - 1; }
  Rat coord(int i) const;
  std::vector<Rat> coords() const;
  const std::vector<Int>& numerators() const { return num_; }
  const Int& denominator() const { return den_; }

  bool is_zero() const;
  bool is_rational() const;
  bool is_integral() const { return den_ == 1; }
  Rat rational_value() const;

  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator/=(const CycNum& o);
  CycNum operator-() const;
  CycNum scaled(const Rat& r) const;

  CycNum inv() const;
  CycNum galois(long d) const;
  // multiplication by zeta^k, an exact rotation
  CycNum times_zeta(long k) const;

  std::complex<double> embed(long r = 1) const;
  std::string str() const;

  friend bool operator==(const CycNum& a, const CycNum& b);

 private:
  void check_same(const CycNum& o) const;
  void normalize();
  std::vector<Int> group_ring() const;

  int p_ = 0;
  std::vector<Int> num_;
  Int den_ = 1;
};

CycNum operator+(CycNum a, const CycNum& b);
CycNum operator-(CycNum a, const CycNum& b);
CycNum operator*(CycNum a, const CycNum& b);
CycNum operator/(CycNum a, const CycNum& b);

CycNum cyc_add(const CycNum& a, const CycNum& b);
CycNum cyc_mul(const CycNum& a, const CycNum& b);
CycNum cyc_neg(const CycNum& a);
bool cyc_is_zero(const CycNum& a);
CycNum cyc_inv(const CycNum& a);
CycNum galois(const CycNum& a, long d);

// zeta^(j/2) chosen among p-th roots of unity: zeta^(j(p+1)/2 mod p)
CycNum half_power(int p, long j);
// sin(pi/p) / sin(d pi/p) as an exact element of Q(zeta_p)
CycNum sin_ratio(int p, long d);

// Root of unity exp(2 pi i t), t kept in [0, 1).
class Phase {
 public:
  Phase() = default;
  explicit Phase(const Rat& t);

  const Rat& t() const { return t_; }
  Phase operator*(const Phase& o) const { return Phase(t_ + o.t_); }
  Phase& operator*=(const Phase& o);
  Phase inv() const { return Phase(-t_); }
  Phase pow(long n) const { return Phase(t_ * n); }
  bool is_one() const { return t_ == 0; }
  std::string str() const;

  friend bool operator==(const Phase& a, const Phase& b) { return a.t_ == b.t_; }

 private:
  Rat t_ = 0;
};

Phase phase_mul(const Phase& a, const Phase& b);
std::optional<CycNum> phase_to_cyc(const Phase& a, int p);
std::complex<double> phase_to_float(const Phase& a);

}  // namespace cranklab
