#pragma once

#include <string>
#include <vector>

#include "cranklab/cyclotomic.hpp"
#include "cranklab/qseries.hpp"

namespace cranklab {

// (n_0, n_1, ..., n_{(p-1)/2}) for eta(pz)^{n_0} prod f_{p,k}(z)^{n_k}
struct EtaVector {
  int p = 0;
  std::vector<long> n;

  EtaVector() = default;
  EtaVector(int p_, std::vector<long> n_);
};

enum class Provenance { Combinatorial, Modular };

struct DissectionElement {
  int p = 0;
  int m = 0;
  long ell = 1;
  QSeries series;
  Provenance provenance = Provenance::Combinatorial;
};

// (p^2 - 1) / 24
long s_p(int p);

// q^{m/p} sum a(pn + m) q^n; F must have integral exponents
QSeries U_pm(const QSeries& F, int p, int m);

// Series known below q^trunc (trunc in whole powers of q).
DissectionElement K_combinatorial(int p, int m, long ell, long trunc);
DissectionElement K_modular(int p, int m, long ell, long trunc);

// i' in 1..(p-1)/2 with r i' = +-i (mod p)
long pi_r(int p, long r, long i);
// eta(pz)^{n_0} prod_k f_{p, rk}(z)^{n_k}, indices canonicalized
EtaProduct j_product(const EtaVector& v, long r = 1);
QSeries j_series(const EtaVector& v, long r, const Rat& trunc);

}  // namespace cranklab
