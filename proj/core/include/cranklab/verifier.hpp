#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cranklab/cyclotomic.hpp"
#include "cranklab/dissection.hpp"
#include "cranklab/etatransform.hpp"
#include "cranklab/qseries.hpp"

namespace cranklab {

// One summand coeff * prefactor * (eta(pz)/eta(z))^{w k} * j(p, pi_r(nvec), z).
// A missing coefficient stands for an unknown (fitting) or zero.
struct IdentityTerm {
  std::optional<CycNum> coeff;
  EtaVector nvec;
  long r = 1;
  long k = 0;
};

// K_{p,m}(zeta^ell, z) = sum of terms
struct IdentitySpec {
  std::string name;
  int p = 0;
  int m = 0;
  long ell = 1;
  int weight = 1;
  EtaProduct prefactor;
  long kpower = 0;  // w; 0 selects eta_quotient_power(p)
  std::vector<IdentityTerm> terms;
};

// 24 / gcd(p - 1, 24), the least power making (eta(pz)/eta(z))^w modular on Gamma_0(p)
long eta_quotient_power(int p);
long kpower_of(const IdentitySpec& s);

EtaProduct term_product(const IdentitySpec& s, const IdentityTerm& t);
QSeries term_series(const IdentitySpec& s, const IdentityTerm& t, const Rat& trunc);
// LHS from the combinatorial construction, known below q^trunc
QSeries lhs_series(const IdentitySpec& s, const Rat& trunc);
QSeries rhs_series(const IdentitySpec& s, const Rat& trunc);

// ---------------------------------------------------------------- modularity

struct ModularityResult {
  bool pass = false;
  long weight_sum = 0;  // n_0 + sum n_k, must be 2
  long mod24 = 0;       // n_0 + 3 sum n_k, must be 0 mod 24
  long quad = 0;        // sum k^2 n_k, must be 2m mod p
  long quad_mod_p = 0;
};
ModularityResult modularity_check(int p, int m, const EtaVector& n);

// Folds prefactor, eta quotient power and the permuted j into one vector in
// the f_{p,1..(p-1)/2}, eta(pz) coordinates; fails for atoms outside that span.
EtaVector fold_term(const IdentitySpec& s, const IdentityTerm& t);

// ---------------------------------------------------------------- cusps

std::vector<Cusp> cusps(int p);
long fan_width(int p, const Cusp& c);
long index_gamma1(int p);
// lower bound for ord(K_{p,m}(zeta_p, z); cusp), cusp != i-infinity
Rat k_lower_bound(int p, const Cusp& c);

struct OrdTable {
  std::vector<Cusp> cusps;
  std::vector<long> widths;
  std::vector<std::string> rows;
  // ORD = width * ord, one row per term
  std::vector<std::vector<Rat>> ORD;
};
OrdTable ord_table(const IdentitySpec& s);
// optionally divided by the term j0
OrdTable ord_table(const IdentitySpec& s, std::optional<size_t> divide_by);

// ord of the whole RHS at a cusp, from the expansion of every term there.
// order is absent when the sum vanishes below checked_to.
struct CuspOrder {
  Cusp cusp;
  Rat term_min;                // smallest ord of a single nonzero term
  std::optional<Rat> order;
  Rat checked_to;
};
CuspOrder rhs_order_at_cusp(const IdentitySpec& s, const Cusp& c, const Rat& depth = 4);

// ---------------------------------------------------------------- certificates

struct CuspBound {
  Cusp cusp;
  long width = 1;
  Rat lhs_exact;             // width * (ord lower bound of the LHS after division)
  Int lhs;                   // ceiling of lhs_exact
  std::optional<Rat> rhs;    // min over terms, absent when there are none
  Int bound;                 // min of the two, as an integer
};

struct ValenceCertificate {
  std::string name;
  int p = 0;
  int m = 0;
  Rat weight;
  long index = 0;
  Rat target;
  std::optional<size_t> j0;
  Rat j0_order = 0;
  std::vector<CuspBound> cusps;
  Int B;
  Int required;            // N*: ORD at i-infinity of LHS - RHS must reach this
  Rat vanish_below;        // the same condition on the undivided series
  Rat checked_to;          // truncation of the compared series
  std::optional<Rat> first_nonzero;
  bool verified = false;
};

// margin: extra q-powers expanded beyond the required order
ValenceCertificate valence_certificate(const IdentitySpec& s, long margin = 2);

// ---------------------------------------------------------------- symmetry

struct SymmetrySign {
  long r = 0;
  long vector_index = 0;
  long k = 0;
  int w = 0;           // +1, -1, or 0 when neither sign matches
  int w_formula = 0;   // (-1)^{r+1+L(n, r)}
};

struct SymmetryReport {
  bool independent = false;
  long rank = 0;
  std::vector<SymmetrySign> signs;
  bool consistent() const;
};

// Terms of a K_{p,0} identity are grouped by (nvec, k); each group must list
// r = 1..(p-1)/2.  independence_order bounds the rank test.
SymmetryReport symmetry_check_K0(const IdentitySpec& s, const Rat& independence_order);
long L_exponent(const EtaVector& n, long a, long b, long d, int p);

struct Gamma0Report {
  long d = 0, a = 0, k = 0;
  long m_image = 0;
  CycNum expected;                // sin ratio * (-1)^{d+1} zeta^{m a k}
  std::optional<CycNum> observed; // the multiplier the slash calculus produces
  bool targets_match = false;     // transformed RHS is proportional to the image RHS
  bool verified = false;
};

// source: identity for K_{p,m}(zeta); image: identity for K_{p,m a^2}(zeta).
Gamma0Report gamma0_symmetry_check(const IdentitySpec& source, const IdentitySpec& image, const Matrix2& A);

// ---------------------------------------------------------------- fitting

struct FitResult {
  bool consistent = false;
  std::vector<CycNum> coeffs;
  long nullity = 0;
  long equations = 0;
  std::optional<Rat> first_failure;
  bool rational_path = false;
};

// Solves target = sum x_i basis_i on all exponents below order.
FitResult fit_coefficients(int p, const std::vector<QSeries>& basis, const QSeries& target, const Rat& order);
// same, forcing elimination over Q(zeta_p)
FitResult fit_coefficients_field(int p, const std::vector<QSeries>& basis, const QSeries& target, const Rat& order);
// fills in the coefficients of spec from the LHS series; returns the fit
FitResult fit_spec(IdentitySpec& s, const Rat& order);

// rank of the basis restricted to exponents below order
long series_rank(const std::vector<QSeries>& basis, const Rat& order);

// ---------------------------------------------------------------- series identities

// q^shift C(zeta_p^ell, q) = sum coeff_i * product_i, compared coefficientwise
struct SeriesIdentity {
  std::string name;
  int p = 0;
  long ell = 1;
  Rat shift = 0;
  std::vector<std::pair<CycNum, EtaProduct>> terms;
};

struct SeriesCheck {
  Rat order;
  std::optional<Rat> first_difference;
  bool verified() const { return !first_difference; }
};

SeriesCheck check_series_identity(const SeriesIdentity& s, const Rat& order);

}  // namespace cranklab
