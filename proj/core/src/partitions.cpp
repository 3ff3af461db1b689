#include "cranklab/partitions.hpp"

#include <stdexcept>

#include "cranklab/dense.hpp"

namespace cranklab {

void enumerate_partitions(int n, const std::function<void(const Partition&)>& visit) {
  if (n < 0) return;
  Partition a;
  if (n == 0) {
    visit(a);
    return;
  }
  a.push_back(n);
  while (true) {
    visit(a);
    // rightmost part larger than 1
    int ones = 0;
    while (!a.empty() && a.back() == 1) {
      a.pop_back();
      ++ones;
    }
    if (a.empty()) return;
    int v = --a.back();
    int rest = ones + 1;
    while (rest > 0) {
      int part = std::min(v, rest);
      a.push_back(part);
      rest -= part;
    }
  }
}

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  enumerate_partitions(n, [&](const Partition& l) { out.push_back(l); });
  return out;
}

std::vector<Int> partition_numbers(int max_n) {
  std::vector<Int> p(max_n + 1);
  if (max_n < 0) return p;
  p[0] = 1;
  for (int n = 1; n <= max_n; ++n) {
    Int s = 0;
    for (int k = 1;; ++k) {
      long g1 = static_cast<long>(k) * (3 * k - 1) / 2;
      if (g1 > n) break;
      bool plus = (k % 2) == 1;
      if (plus) s += p[n - g1];
      else s -= p[n - g1];
      long g2 = static_cast<long>(k) * (3 * k + 1) / 2;
      if (g2 <= n) {
        if (plus) s += p[n - g2];
        else s -= p[n - g2];
      }
    }
    p[n] = s;
  }
  return p;
}

Int p_of(int n) {
  if (n < 0) return 0;
  return partition_numbers(n)[n];
}

long crank(const Partition& lambda) {
  if (lambda.empty()) throw std::invalid_argument("crank of the empty partition is undefined");
  long ones = 0;
  for (int v : lambda) ones += (v == 1);
  if (ones == 0) return lambda.front();
  long larger = 0;
  for (int v : lambda) larger += (v > ones);
  return larger - ones;
}

Int M_comb(long m, int n) {
  Int c = 0;
  if (n < 1) return c;
  enumerate_partitions(n, [&](const Partition& l) {
    if (crank(l) == m) ++c;
  });
  return c;
}

const Int& CrankTable::at(int k, int n) const { return rows_.at(n).at(mod_floor(k, p_)); }

namespace {

std::vector<std::vector<Int>> series_rows(int p, int max_n) {
  const int N = max_n + 1;
  std::vector<std::vector<Int>> A(N, std::vector<Int>(p));
  A[0][0] = 1;
  for (long n = 1; n < N; ++n) {
    int s = (n % 2 == 0) ? 1 : -1;
    // n > 0: q^{n(n+1)/2} (1 - z) sum_{k>=0} z^k q^{nk}
    for (long k = 0;; ++k) {
      long e = n * (n + 1) / 2 + n * k;
      if (e >= N) break;
      A[e][k % p] += s;
      A[e][(k + 1) % p] -= s;
    }
    // -n < 0: q^{n(n-1)/2} (1 - z) / (1 - z q^{-n}) = -q^{n(n-1)/2} (1 - z) sum_{k>=1} z^{-k} q^{nk}
    for (long k = 1;; ++k) {
      long e = n * (n - 1) / 2 + n * k;
      if (e >= N) break;
      A[e][mod_floor(-k, p)] -= s;
      A[e][mod_floor(1 - k, p)] += s;
    }
  }
  for (long n = 1; n < N; ++n)
    for (long e = n; e < N; ++e)
      for (int i = 0; i < p; ++i) A[e][i] += A[e - n][i];
  return A;
}

}  // namespace

CrankTable crank_table(int p, int max_n, CrankConvention conv) {
  if (p < 2 || max_n < 0) throw std::invalid_argument("crank_table: bad arguments");
  if (conv == CrankConvention::Series) return CrankTable(p, conv, series_rows(p, max_n));
  if (max_n > 75) throw std::invalid_argument("combinatorial crank table is limited to n <= 75");
  std::vector<std::vector<Int>> rows(max_n + 1, std::vector<Int>(p));
  rows[0][0] = 1;
  for (int n = 1; n <= max_n; ++n)
    enumerate_partitions(n, [&](const Partition& l) { ++rows[n][mod_floor(crank(l), p)]; });
  return CrankTable(p, conv, std::move(rows));
}

Int M_class(long k, int p, int n, CrankConvention conv) {
  if (n < 0) return 0;
  if (conv == CrankConvention::Combinatorial && n == 0) return mod_floor(k, p) == 0 ? 1 : 0;
  return crank_table(p, n, conv).at(static_cast<int>(k), n);
}

QSeries crank_series(int p, long ell, long trunc) {
  if (ell < 1 || ell > p - 1) throw std::invalid_argument("crank_series: ell must lie in 1..p-1");
  std::vector<BinomialFactor> fs;
  for (long n = 1; n < trunc; ++n) {
    fs.push_back({Rat(n), 0, 1, 1});
    fs.push_back({Rat(n), ell, 1, -1});
    fs.push_back({Rat(n), -ell, 1, -1});
  }
  return expand_product(p, Rat(0), fs, Rat(trunc));
}

}  // namespace cranklab
