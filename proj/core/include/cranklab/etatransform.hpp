#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cranklab/cyclotomic.hpp"
#include "cranklab/qseries.hpp"

namespace cranklab {

struct Matrix2 {
  Int a = 1, b = 0, c = 0, d = 1;

  Matrix2() = default;
  Matrix2(Int a_, Int b_, Int c_, Int d_);  // throws unless ad - bc = 1

  static Matrix2 identity() { return {}; }
  static Matrix2 T(long n = 1) { return Matrix2(1, n, 0, 1); }
  static Matrix2 S() { return Matrix2(0, -1, 1, 0); }

  Matrix2 operator*(const Matrix2& o) const;
  Matrix2 operator-() const;
  Matrix2 inverse() const;
  bool in_gamma0(long N) const;
  std::complex<double> act(std::complex<double> z) const;
  // cz + d
  std::complex<double> j(std::complex<double> z) const;
  std::string str() const;

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// a/c in lowest terms with c >= 0; i-infinity is 1/0.
struct Cusp {
  Int a = 1, c = 0;

  Cusp() = default;
  Cusp(Int a_, Int c_);
  static Cusp infinity() { return {}; }
  bool is_infinity() const { return c == 0; }
  std::string str() const;
  // some A in SL2(Z) with A(i-infinity) = a/c
  Matrix2 matrix() const;

  friend bool operator==(const Cusp&, const Cusp&) = default;
};

// Jacobi symbol (a | n) for odd n; negative n uses |n|.
int jacobi(const Int& a, const Int& n);

// eta | [A]_{1/2} = nu_eta(A) eta, principal branch of (cz+d)^{1/2}
Phase nu_eta(const Matrix2& A);

struct SlashResult {
  Phase phase;
  EtaProduct target;
  Rat weight;
};

SlashResult slash_eta(const Matrix2& A);
// A in Gamma_0(N); the image index rho*a is canonicalized
SlashResult slash_f(long N, long rho, const Matrix2& A);
// E^{(N)}_{g,h}(Az) for any A; weight 0
SlashResult slash_E(long N, long g, long h, const Matrix2& A);
// Weight-|F| action on a product of atoms for A under which every atom maps
// to an atom of the same kind (eta(delta z) needs A in Gamma_0(delta), f and
// eta_{N,k} need A in Gamma_0(N), E atoms need delta = 1).
SlashResult slash_product(const EtaProduct& F, const Matrix2& A);

// exp(pi i (l(d-1)/p + c d l^2/p^2 - c l/p)) for A in Gamma_0(p)
Phase mu_multiplier(long p, const Matrix2& A, long ell);

// (delta 0; 0 1) A = B (x y; 0 w), B in SL2(Z), x w = delta, 0 <= y < w
struct ScaledDecomposition {
  Matrix2 B;
  Int x, y, w;
};
ScaledDecomposition decompose_scaled(long delta, const Matrix2& A);

// One factor of atom(Az) (cz+d)^{-wt}: it equals
//   phase * w^{-wt} * atom((x z + y)/w)
// where atom has delta = 1 and wt is 1/2 for eta and 0 for E.  f_{N,rho} and
// eta_{N,k} split into an eta part and an E part.
struct AtomImage {
  Phase phase;
  EtaAtom atom;
  Int x, y, w;
  Rat weight;
  // leading exponent in q = e^{2 pi i z}
  Rat order;
};
std::vector<AtomImage> transform_atom(const EtaAtom& atom, const Matrix2& A);

// invariant order ord(F|A; i-infinity) for any A with A(i-infinity) = cusp
Rat ord_at_matrix(const EtaProduct& F, const Matrix2& A);
Rat ord_at_cusp(const EtaProduct& F, const Cusp& cusp);

// Expansion of F|[A]_k at i-infinity: F|A = phase * p^{p_power} * series, the
// series in q = e^{2 pi i z} with coefficients in Q(zeta_p).  Throws when an
// image needs roots of unity outside Q(zeta_p) or a width that is not a power of p.
struct MatrixExpansion {
  Phase phase;
  Rat p_power;
  QSeries series;
};
MatrixExpansion expand_at_matrix(const EtaProduct& F, const Matrix2& A, int p, const Rat& trunc);

// sum over eta(m z)^{r_m} of gcd(m, c)^2 r_m / (24 m); plain eta atoms only
Rat etaquot_ord_closed(const EtaProduct& F, const Cusp& cusp);
// g^2/(24N) + (g^2/(2N)) P_2(a rho / g) with g = gcd(c, N), for f_{N,rho}(z)
Rat f_ord_closed(long N, long rho, const Cusp& cusp);

// ---------------------------------------------------------------- numerics

std::complex<double> eval_eta(std::complex<double> tau);
// f_{N,rho} straight from its defining product, for any rho not = 0 mod N
std::complex<double> eval_f(long N, long rho, std::complex<double> tau);
std::complex<double> eval_geta(long N, long k, std::complex<double> tau);
std::complex<double> eval_E(long N, long g, long h, std::complex<double> tau);
std::complex<double> eval_atom(const EtaAtom& a, std::complex<double> tau);
std::complex<double> eval_product(const EtaProduct& F, std::complex<double> tau);
std::complex<double> eval_image(const AtomImage& im, std::complex<double> z);

}  // namespace cranklab
