#include "cranklab/dissection.hpp"

#include <stdexcept>

#include "cranklab/dense.hpp"
#include "cranklab/partitions.hpp"

namespace cranklab {

EtaVector::EtaVector(int p_, std::vector<long> n_) : p(p_), n(std::move(n_)) {
  if (p < 5 || n.size() != static_cast<size_t>((p + 1) / 2))
    throw std::invalid_argument("eta vector for p = " + std::to_string(p) + " needs " + std::to_string((p + 1) / 2) +
                                " entries");
}

long s_p(int p) { return (static_cast<long>(p) * p - 1) / 24; }

namespace {

void check_pml(int p, int m, long ell) {
  if (p < 5) throw std::invalid_argument("dissection needs a prime p > 3");
  if (m < 0 || m >= p) throw std::invalid_argument("m must lie in 0..p-1");
  if (ell < 1 || ell >= p) throw std::invalid_argument("ell must lie in 1..p-1");
}

}  // namespace

QSeries U_pm(const QSeries& F, int p, int m) {
  if (F.D() != 1) {
    for (const auto& [e, c] : F.terms())
      if (e % F.D() != 0) throw std::invalid_argument("U_pm needs integral exponents");
  }
  QSeries G = F.rescaled(1);
  // exponents e = m (mod p) below trunc map to e/p
  QSeries out(F.p(), p, G.trunc_scaled());
  for (const auto& [e, c] : G.terms())
    if (mod_floor(e - m, static_cast<long>(p)) == 0) out.add_scaled(e, c);
  return out;
}

DissectionElement K_combinatorial(int p, int m, long ell, long trunc) {
  check_pml(p, m, ell);
  const long s = s_p(p);
  long n0 = static_cast<long>(rat_ceil(Rat(s - m, p)).get_si());
  long top = p * (trunc - 1) + m - s;
  std::vector<std::vector<Int>> rows;
  if (top >= 0) {
    CrankTable t = crank_table(p, static_cast<int>(top), CrankConvention::Series);
    for (int i = 0; i <= top; ++i) rows.push_back(t.row(i));
  }
  Rat tr(trunc);
  QSeries inner(p, 1, trunc);
  std::vector<Int> g(p);
  for (long n = n0; n < trunc; ++n) {
    long N = p * n + m - s;
    if (N < 0 || N > top) continue;
    for (int k = 0; k < p; ++k) g[mod_floor(k * ell, static_cast<long>(p))] = rows[N][k];
    CycNum c = CycNum::from_group_ring(p, g);
    if (!c.is_zero()) inner.add_scaled(n, c);
  }
  std::vector<BinomialFactor> fs;
  for (long n = 1; p * n < trunc; ++n) fs.push_back({Rat(p * n), 0, 1, 1});
  QSeries prod = expand_product(p, Rat(0), fs, tr);
  QSeries out = qs_shift(qs_mul(prod, inner), Rat(m, p));
  return {p, m, ell, out, Provenance::Combinatorial};
}

DissectionElement K_modular(int p, int m, long ell, long trunc) {
  check_pml(p, m, ell);
  // (1 - zeta^l) SF^1_l = eta(p^2 z) eta(z) (1 - zeta^l) / E_{0,l}(z)
  //                     = q^{s_p} (q^{p^2}; q^{p^2}) (q; q) / ((zeta^l q; q) (zeta^-l q; q))
  const long p2 = static_cast<long>(p) * p;
  long bound = p * trunc;
  std::vector<BinomialFactor> fs;
  for (long n = 1; n < bound; ++n) {
    if (p2 * n < bound) fs.push_back({Rat(p2 * n), 0, 1, 1});
    fs.push_back({Rat(n), 0, 1, 1});
    fs.push_back({Rat(n), ell, 1, -1});
    fs.push_back({Rat(n), -ell, 1, -1});
  }
  QSeries S = expand_product(p, Rat(s_p(p)), fs, Rat(bound));
  return {p, m, ell, U_pm(S, p, m), Provenance::Modular};
}

long pi_r(int p, long r, long i) {
  long h = (p - 1) / 2;
  if (r < 1 || r > h || i < 1 || i > h) throw std::invalid_argument("pi_r needs 1 <= r, i <= (p-1)/2");
  long j = mod_floor(i * inverse_mod(r, p), static_cast<long>(p));
  return j <= h ? j : p - j;
}

EtaProduct j_product(const EtaVector& v, long r) {
  EtaProduct F;
  F.mul(EtaAtom::eta(v.p), v.n[0]);
  for (size_t k = 1; k < v.n.size(); ++k) F.mul(EtaAtom::f(v.p, r * static_cast<long>(k)), v.n[k]);
  return F;
}

QSeries j_series(const EtaVector& v, long r, const Rat& trunc) { return product_series(j_product(v, r), trunc, v.p); }

}  // namespace cranklab
