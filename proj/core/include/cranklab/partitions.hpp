#pragma once

#include <functional>
#include <vector>

#include "cranklab/cyclotomic.hpp"
#include "cranklab/qseries.hpp"

namespace cranklab {

// parts in weakly decreasing order
using Partition = std::vector<int>;

enum class CrankConvention { Combinatorial, Series };

void enumerate_partitions(int n, const std::function<void(const Partition&)>& visit);
std::vector<Partition> partitions_of(int n);
Int p_of(int n);
std::vector<Int> partition_numbers(int max_n);

long crank(const Partition& lambda);

// number of partitions of n with crank m, by enumeration
Int M_comb(long m, int n);

// Rows n = 0..max_n of M(k, p, n), k = 0..p-1.  The series convention reads
// the coefficients of C(z, q) reduced modulo z^p - 1; it is computed from
// C(z,q) (q;q)_inf = 1 + (1 - z) sum_{n != 0} (-1)^n q^{n(n+1)/2} / (1 - z q^n).
// The combinatorial convention enumerates partitions.
class CrankTable {
 public:
  CrankTable(int p, CrankConvention conv, std::vector<std::vector<Int>> rows)
      : p_(p), conv_(conv), rows_(std::move(rows)) {}
  int p() const { return p_; }
  CrankConvention convention() const { return conv_; }
  int max_n() const { return static_cast<int>(rows_.size()) - 1; }
  const std::vector<Int>& row(int n) const { return rows_.at(n); }
  const Int& at(int k, int n) const;

 private:
  int p_;
  CrankConvention conv_;
  std::vector<std::vector<Int>> rows_;
};

CrankTable crank_table(int p, int max_n, CrankConvention conv = CrankConvention::Series);
Int M_class(long k, int p, int n, CrankConvention conv = CrankConvention::Series);

// C(zeta_p^ell, q) from the product (q;q)_inf / ((zeta q;q)_inf (zeta^-1 q;q)_inf)
QSeries crank_series(int p, long ell, long trunc);

}  // namespace cranklab
