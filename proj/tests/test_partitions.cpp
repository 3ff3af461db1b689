#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cranklab/partitions.hpp"
#include "oracles.hpp"

using namespace cranklab;

namespace {

// M(m, n) from the test's own enumerator and crank
std::map<long, long> crank_counts(int n) {
  std::map<long, long> m;
  for (const auto& lam : oracle::partitions(n)) ++m[oracle::crank(lam)];
  return m;
}

}  // namespace

TEST(Partitions, Counts) {
  EXPECT_EQ(partitions_of(4).size(), 5u);
  EXPECT_EQ(partitions_of(6).size(), 11u);
  EXPECT_EQ(partitions_of(0).size(), 1u);
  EXPECT_EQ(p_of(0), 1);
  EXPECT_EQ(p_of(100), Int("190569292"));
  auto pn = partition_numbers(40);
  for (int n = 0; n <= 40; ++n) EXPECT_EQ(pn[n], Int(static_cast<long>(oracle::partitions(n).size())));
}

TEST(Partitions, EnumerationIsExactlyOnce) {
  for (int n = 1; n <= 18; ++n) {
    auto mine = partitions_of(n);
    auto ref = oracle::partitions(n);
    std::sort(mine.begin(), mine.end());
    std::sort(ref.begin(), ref.end());
    ASSERT_EQ(mine, ref) << n;
    for (const auto& lam : mine) {
      ASSERT_TRUE(std::is_sorted(lam.rbegin(), lam.rend()));
      int s = 0;
      for (int x : lam) s += x;
      ASSERT_EQ(s, n);
    }
  }
}

TEST(Partitions, Crank) {
  EXPECT_EQ(crank({4}), 4);
  EXPECT_EQ(crank({2, 1, 1}), -2);
  EXPECT_EQ(crank({3, 2, 1}), 1);
  EXPECT_EQ(crank({1}), -1);
  EXPECT_THROW(crank({}), std::exception);
  std::multiset<long> c5;
  for (const auto& lam : partitions_of(5)) c5.insert(crank(lam));
  EXPECT_EQ(c5, (std::multiset<long>{5, 3, 1, 0, -1, -3, -5}));
}

TEST(Partitions, CrankAgainstOracle) {
  for (int n = 1; n <= 20; ++n)
    for (const auto& lam : oracle::partitions(n)) ASSERT_EQ(crank(lam), oracle::crank(lam));
}

TEST(Partitions, CrankCountsSumToPartitionNumber) {
  for (int n = 1; n <= 30; ++n) {
    Int total = 0;
    for (long m = -n; m <= n; ++m) total += M_comb(m, n);
    ASSERT_EQ(total, p_of(n)) << n;
  }
  // beyond 30 one streaming pass per n is enough
  for (int n = 31; n <= 60; ++n) {
    Int count = 0;
    enumerate_partitions(n, [&](const Partition&) { ++count; });
    ASSERT_EQ(count, p_of(n)) << n;
  }
}

TEST(Partitions, CrankSymmetry) {
  // n = 1 is the exception: the partition (1) has crank -1
  EXPECT_EQ(M_comb(-1, 1), 1);
  EXPECT_EQ(M_comb(1, 1), 0);
  for (int n = 2; n <= 40; ++n)
    for (long m = 0; m <= n; ++m) ASSERT_EQ(M_comb(m, n), M_comb(-m, n)) << n << " " << m;
}

TEST(Partitions, McombMatchesOracle) {
  for (int n = 1; n <= 22; ++n) {
    auto ref = crank_counts(n);
    for (long m = -n - 1; m <= n + 1; ++m) {
      long want = ref.count(m) ? ref[m] : 0;
      ASSERT_EQ(M_comb(m, n), Int(want)) << n << " " << m;
    }
  }
}

TEST(Partitions, RamanujanCongruenceClasses) {
  for (long k = 0; k < 5; ++k) EXPECT_EQ(M_class(k, 5, 4), 1);
  for (long k = 0; k < 7; ++k) EXPECT_EQ(M_class(k, 7, 5), 1);
  for (long k = 0; k < 11; ++k) EXPECT_EQ(M_class(k, 11, 6), 1);
  for (long k = 0; k < 5; ++k) EXPECT_EQ(M_class(k, 5, 9, CrankConvention::Combinatorial), p_of(9) / 5);
  for (long k = 0; k < 11; ++k) EXPECT_EQ(M_class(k, 11, 17, CrankConvention::Combinatorial), p_of(17) / 11);
}

TEST(Partitions, SeriesAgreesWithEnumeration) {
  for (int p : {5, 7, 11, 13}) {
    CrankTable s = crank_table(p, 40, CrankConvention::Series);
    CrankTable c = crank_table(p, 40, CrankConvention::Combinatorial);
    for (int n = 2; n <= 40; ++n)
      for (int k = 0; k < p; ++k) ASSERT_EQ(s.at(k, n), c.at(k, n)) << p << " " << n << " " << k;
    Int sum = 0;
    for (int k = 0; k < p; ++k) sum += c.at(k, 30);
    EXPECT_EQ(sum, p_of(30));
  }
}

TEST(Partitions, SeriesConventionAtOne) {
  // the series gives M(0,1) = -1 and M(+-1,1) = 1; enumeration has one partition of crank -1
  for (int p : {5, 7, 11}) {
    CrankTable s = crank_table(p, 3, CrankConvention::Series);
    CrankTable c = crank_table(p, 3, CrankConvention::Combinatorial);
    EXPECT_EQ(s.at(0, 1), -1);
    EXPECT_EQ(s.at(1, 1), 1);
    EXPECT_EQ(s.at(p - 1, 1), 1);
    EXPECT_EQ(c.at(p - 1, 1), 1);
    EXPECT_EQ(c.at(0, 1), 0);
    EXPECT_EQ(c.at(1, 1), 0);
  }
}

TEST(Partitions, CrankSeries) {
  for (int p : {5, 7, 11, 13}) {
    CrankTable tab = crank_table(p, 40, CrankConvention::Combinatorial);
    for (long ell = 1; ell < p; ++ell) {
      QSeries c = crank_series(p, ell, 41);
      EXPECT_EQ(qs_coeff(c, Rat(0)), CycNum(p, 1));
      EXPECT_EQ(qs_coeff(c, Rat(1)), CycNum(p, -1) + CycNum::zeta_pow(p, ell) + CycNum::zeta_pow(p, -ell));
      for (int n = 2; n <= 40; ++n) {
        CycNum want(p);
        for (long k = 0; k < p; ++k)
          want += CycNum::zeta_pow(p, k * ell).scaled(Rat(tab.at(static_cast<int>(k), n)));
        ASSERT_EQ(qs_coeff(c, Rat(n)), want) << p << " " << ell << " " << n;
      }
    }
  }
}

TEST(Partitions, CrankSeriesFromProductOracle) {
  // (q;q) / ((zeta q;q)(zeta^-1 q;q)) expanded by the test's own group-ring series
  const int p = 7, n = 35;
  oracle::GR gr(p, n);
  for (int m = 1; m < n; ++m) {
    gr.mul(m, 0, 1);
    gr.mul(m, 1, -1);
    gr.mul(m, -1, -1);
  }
  QSeries c = crank_series(p, 1, n);
  for (int i = 0; i < n; ++i) ASSERT_EQ(qs_coeff(c, Rat(i)), gr.coeff(i)) << i;
}
