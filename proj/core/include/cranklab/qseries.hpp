#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cranklab/cyclotomic.hpp"

namespace cranklab {

// Truncated series sum c_e q^(e/D) over Q(zeta_p).  Coefficients at scaled
// exponents >= trunc are unknown.
class QSeries {
 public:
  QSeries() = default;
  QSeries(int p, long D, long trunc_scaled);
  // zero series known below q^trunc
  static QSeries zero(int p, const Rat& trunc);
  static QSeries monomial(const CycNum& c, const Rat& e, const Rat& trunc);

  int p() const { return p_; }
  long D() const { return D_; }
  long trunc_scaled() const { return trunc_; }
  Rat trunc() const;
  const std::map<long, CycNum>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  // adds c to the coefficient at exponent e (which must lie on the lattice)
  void add_term(const Rat& e, const CycNum& c);
  void add_scaled(long e, const CycNum& c);

  CycNum coeff(const Rat& r) const;
  std::optional<Rat> lead_exponent() const;
  Rat exponent(long scaled) const;
  QSeries rescaled(long newD) const;
  QSeries truncated(const Rat& t) const;
  bool is_rational() const;

  QSeries& operator+=(const QSeries& o);
  QSeries& operator-=(const QSeries& o);
  QSeries operator-() const;

 private:
  friend QSeries qs_mul(const QSeries&, const QSeries&);
  int p_ = 0;
  long D_ = 1;
  long trunc_ = 0;
  std::map<long, CycNum> terms_;
};

QSeries operator+(QSeries a, const QSeries& b);
QSeries operator-(QSeries a, const QSeries& b);
QSeries operator*(const QSeries& a, const QSeries& b);

QSeries qs_add(const QSeries& a, const QSeries& b);
QSeries qs_sub(const QSeries& a, const QSeries& b);
QSeries qs_neg(const QSeries& a);
QSeries qs_mul(const QSeries& a, const QSeries& b);
QSeries qs_scale(const QSeries& a, const CycNum& c);
QSeries qs_shift(const QSeries& a, const Rat& r);
QSeries qs_pow(const QSeries& a, long n);
QSeries qs_inv(const QSeries& a);
// substitutes q -> q^k
QSeries qs_dilate(const QSeries& a, long k);
CycNum qs_coeff(const QSeries& f, const Rat& r);
bool qs_eq_to_order(const QSeries& f, const QSeries& g, const Rat& r);
// smallest exponent below r where f and g differ
std::optional<Rat> qs_first_difference(const QSeries& f, const QSeries& g, const Rat& r);
std::string qs_dump(const QSeries& f);

// Second periodic Bernoulli polynomial {t}^2 - {t} + 1/6.
Rat bernoulli_p2(const Rat& t);

// ---------------------------------------------------------------- atoms

enum class AtomKind { Eta, F, Geta, E };

// Eta:  eta(delta z)
// F:    f_{N,a}(delta z)
// Geta: eta_{N,a}(delta z)
// E:    E^{(N)}_{a,b}(delta z), Yang's generalized eta function of level N
struct EtaAtom {
  AtomKind kind = AtomKind::Eta;
  long N = 1;
  long a = 0;
  long b = 0;
  long delta = 1;

  static EtaAtom eta(long delta = 1);
  static EtaAtom f(long N, long rho, long delta = 1);
  static EtaAtom geta(long N, long k, long delta = 1);
  static EtaAtom E(long N, long g, long h, long delta = 1);

  // leading exponent of the atom's q-expansion
  Rat lead_exponent() const;
  std::string str() const;

  auto operator<=>(const EtaAtom&) const = default;
  bool operator==(const EtaAtom&) const = default;
};

// Reduction of E^{(N)}_{g,h} to 0 <= g,h < N: returns the reduced atom and
// the root of unity u with E_{g,h} = u * E_{g',h'}.
std::pair<EtaAtom, Phase> reduce_E(long N, long g, long h, long delta = 1);

struct EtaProduct {
  std::vector<std::pair<EtaAtom, long>> factors;  // sorted, merged, nonzero exponents
  std::optional<CycNum> scalar;                   // absent means 1

  EtaProduct() = default;
  EtaProduct(std::initializer_list<std::pair<EtaAtom, long>> fs);

  void mul(const EtaAtom& a, long n);
  EtaProduct& operator*=(const EtaProduct& o);
  EtaProduct pow(long n) const;
  Rat lead_exponent() const;
  // total weight, counting 1/2 for eta and f atoms and 0 for Geta and E
  Rat weight() const;
  std::string str() const;
};

EtaProduct operator*(EtaProduct a, const EtaProduct& b);

// ---------------------------------------------------------------- expansions

QSeries eta_series(long delta, const Rat& trunc, int p);
QSeries geta_series(long N, long k, const Rat& trunc, int p, long delta = 1);
QSeries f_series(long N, long rho, const Rat& trunc, int p, long delta = 1);
QSeries E_series(int p, long g, long h, const Rat& trunc, long delta = 1);
QSeries atom_series(const EtaAtom& a, const Rat& trunc, int p);
// expands the whole product in one pass; the fast path for eta quotients
QSeries product_series(const EtaProduct& F, const Rat& trunc, int p);

}  // namespace cranklab
