#pragma once

#include <optional>
#include <vector>

#include "cranklab/cyclotomic.hpp"
#include "cranklab/qseries.hpp"

namespace cranklab {

// (1 - sign * zeta^h * q^e)^power
struct BinomialFactor {
  Rat e;
  long h = 0;
  int sign = 1;
  long power = 1;
};

// Dense truncated series with coefficients in the integral group ring
// Z[C_lanes].  Entry i is the coefficient of q^((lead + i*step)/D); lane j of
// an entry is the coefficient of g^j.  lanes == 1 means plain integers.
class GroupRingSeries {
 public:
  GroupRingSeries(int lanes, long D, long lead, long step, long len);

  int lanes() const { return lanes_; }
  long D() const { return D_; }
  long lead() const { return lead_; }
  long step() const { return step_; }
  long len() const { return len_; }

  Int& at(long i, int lane) { return a_[static_cast<size_t>(i) * lanes_ + lane]; }
  const Int& at(long i, int lane) const { return a_[static_cast<size_t>(i) * lanes_ + lane]; }

  // in place multiplication / division by (1 - sign g^h q^(k*step/D))
  void mul_binomial(long k, long h, int sign);
  void div_binomial(long k, long h, int sign);

  // reduces lanes into Q(zeta_p) (lanes must be 1 or p) and multiplies by scalar
  QSeries to_qseries(int p, const std::optional<CycNum>& scalar) const;

 private:
  int lanes_;
  long D_, lead_, step_, len_;
  std::vector<Int> a_;
};

// q^lead * scalar * prod factors, expanded below q^trunc.  Factors with zero
// exponent are folded into the scalar.
QSeries expand_product(int p, const Rat& lead, const std::vector<BinomialFactor>& factors,
                       const Rat& trunc, std::optional<CycNum> scalar = std::nullopt);

// Factor list of an atom's infinite product, with exponents below bound.
void atom_factors(const EtaAtom& atom, long power, const Rat& bound, std::vector<BinomialFactor>& out);

}  // namespace cranklab
