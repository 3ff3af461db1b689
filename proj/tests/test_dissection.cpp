#include <gtest/gtest.h>

#include <set>

#include "cranklab/dissection.hpp"
#include "cranklab/partitions.hpp"
#include "oracles.hpp"

using namespace cranklab;

namespace {

CycNum zp(int p, long k) { return CycNum::zeta_pow(p, k); }

QSeries poly(int p, const std::vector<long>& c) {
  QSeries s = QSeries::zero(p, Rat(static_cast<long>(c.size())));
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i]) s.add_term(Rat(static_cast<long>(i)), CycNum(p, c[i]));
  return s;
}

}  // namespace

TEST(Upm, IndexArithmetic) {
  QSeries F = poly(5, {1, 2, 3, 4, 5, 6, 7, 8});
  QSeries U = U_pm(F, 5, 2);
  EXPECT_EQ(U.size(), 2u);
  EXPECT_EQ(qs_coeff(U, Rat(2, 5)), CycNum(5, 3));
  EXPECT_EQ(qs_coeff(U, Rat(7, 5)), CycNum(5, 8));
  EXPECT_THROW(U_pm(qs_shift(F, Rat(1, 3)), 5, 0), std::exception);
}

TEST(Upm, InvertsDilation) {
  QSeries F = poly(7, {3, -1, 4, 1, -5, 9, 2, 6});
  QSeries back = U_pm(qs_dilate(F, 7), 7, 0);
  EXPECT_TRUE(qs_eq_to_order(back, F, F.trunc()));
}

TEST(Upm, ResidueClassesRecombine) {
  std::mt19937 rng(2);
  QSeries F = QSeries::zero(11, Rat(60));
  for (long e = 0; e < 60; ++e) F.add_term(Rat(e), oracle::random_cyc(rng, 11, 3));
  QSeries sum = QSeries::zero(11, Rat(60));
  for (int m = 0; m < 11; ++m) sum += qs_dilate(U_pm(F, 11, m), 11).truncated(60);
  // U_{p,m} keeps q^{e/p}, so dilating by p restores q^e
  EXPECT_TRUE(qs_eq_to_order(sum, F, Rat(60)));
}

TEST(Dissection, SpValues) {
  EXPECT_EQ(s_p(5), 1);
  EXPECT_EQ(s_p(11), 5);
  EXPECT_EQ(s_p(13), 7);
  // 24 | p^2 - 1 for every prime p > 3
  for (int p : {5, 7, 11, 13, 17, 19, 23}) EXPECT_EQ((p * p - 1) % 24, 0);
}

TEST(Dissection, K11ZeroIsZero) {
  for (long ell = 1; ell < 11; ++ell) {
    auto K = K_combinatorial(11, 0, ell, 40);
    EXPECT_TRUE(K.series.empty()) << ell;
    EXPECT_EQ(K.series.trunc(), Rat(40));
  }
}

TEST(Dissection, K11FiveClosedForm) {
  auto K = K_combinatorial(11, 5, 1, 40);
  EtaProduct F{{EtaAtom::eta(11), 2}, {EtaAtom::geta(11, 1), -1}};
  EXPECT_TRUE(qs_eq_to_order(K.series, product_series(F, Rat(40), 11), Rat(40)));
  EXPECT_EQ(K.provenance, Provenance::Combinatorial);
}

TEST(Dissection, K13ZeroStartsAtSix) {
  // n starts at ceil(7/13) = 1, so the first coefficient collects M(k, 13, 6)
  auto K = K_combinatorial(13, 0, 1, 5);
  ASSERT_TRUE(K.series.lead_exponent());
  EXPECT_EQ(*K.series.lead_exponent(), Rat(1));
  CycNum want(13);
  for (long k = 0; k < 13; ++k) want += zp(13, k).scaled(Rat(M_class(k, 13, 6, CrankConvention::Combinatorial)));
  EXPECT_EQ(qs_coeff(K.series, Rat(1)), want);
}

TEST(Dissection, CombinatorialEqualsModular) {
  for (int p : {5, 7, 11, 13}) {
    for (int m = 0; m < p; ++m) {
      auto a = K_combinatorial(p, m, 1, 50);
      auto b = K_modular(p, m, 1, 50);
      EXPECT_EQ(b.provenance, Provenance::Modular);
      ASSERT_GE(a.series.trunc(), Rat(50));
      ASSERT_GE(b.series.trunc(), Rat(50));
      ASSERT_TRUE(qs_eq_to_order(a.series, b.series, Rat(50))) << p << " " << m;
      for (const auto& [e, c] : a.series.terms()) {
        ASSERT_TRUE(c.is_integral());
        ASSERT_EQ(rat_frac(a.series.exponent(e)), rat_frac(Rat(m, p)));
      }
    }
  }
}

TEST(Dissection, OtherEll) {
  for (long ell : {2L, 5L}) {
    for (int m : {0, 3, 7}) {
      auto a = K_combinatorial(13, m, ell, 25);
      auto b = K_modular(13, m, ell, 25);
      EXPECT_TRUE(qs_eq_to_order(a.series, b.series, Rat(25))) << ell << " " << m;
      // the galois conjugate of the ell = 1 element
      auto one = K_combinatorial(13, m, 1, 25);
      QSeries conj(13, one.series.D(), one.series.trunc_scaled());
      for (const auto& [e, c] : one.series.terms()) conj.add_scaled(e, galois(c, ell));
      EXPECT_TRUE(qs_eq_to_order(a.series, conj, Rat(25)));
    }
  }
}

TEST(Dissection, EtaTimesCrankIsModularProduct) {
  // eta(p^2 z) q^{-1/24} C(zeta^l, q) = (1 - zeta^l) eta(p^2 z) eta(z) / E_{0,l}(z)
  for (int p : {5, 11, 13}) {
    for (long ell : {1L, 2L}) {
      Rat t(50);
      QSeries lhs = qs_shift(crank_series(p, ell, 50), Rat(-1, 24)) * eta_series(p * p, t, p);
      EtaProduct F{{EtaAtom::eta(p * p), 1}, {EtaAtom::eta(1), 1}, {EtaAtom::E(p, 0, ell), -1}};
      F.scalar = CycNum(p, 1) - zp(p, ell);
      QSeries rhs = product_series(F, t, p);
      EXPECT_TRUE(qs_eq_to_order(lhs, rhs, std::min(lhs.trunc(), t))) << p << " " << ell;
    }
  }
}

TEST(Dissection, RecombinesToCrankSeries) {
  // sum_m q^m dilate_p(q^{-m/p} K_m) = q^{s_p} (q^{p^2}; q^{p^2}) C(zeta, q)
  for (int p : {5, 7, 11}) {
    long T = 12;
    Rat t(p * T);
    QSeries sum = QSeries::zero(p, t);
    for (int m = 0; m < p; ++m) {
      auto K = K_combinatorial(p, m, 1, T);
      sum += qs_shift(qs_dilate(qs_shift(K.series, Rat(-m, p)), p), Rat(m));
    }
    QSeries want = qs_shift(crank_series(p, 1, p * T) * qs_shift(eta_series(p * p, t, p), Rat(-p * p, 24)), Rat(s_p(p)));
    Rat upto = std::min(sum.trunc(), want.trunc());
    EXPECT_GE(upto, Rat(p * (T - 1)));
    EXPECT_TRUE(qs_eq_to_order(sum, want, upto)) << p;
  }
}

TEST(Dissection, BadArguments) {
  EXPECT_THROW(K_combinatorial(4, 0, 1, 10), std::exception);
  EXPECT_THROW(K_combinatorial(13, 13, 1, 10), std::exception);
  EXPECT_THROW(K_modular(13, 0, 0, 10), std::exception);
  EXPECT_THROW(EtaVector(13, {1, 2, 3}), std::exception);
}

TEST(PiR, Basics) {
  for (long i = 1; i <= 6; ++i) EXPECT_EQ(pi_r(13, 1, i), i);
  EXPECT_EQ(pi_r(13, 2, 1), 6);
  EXPECT_THROW(pi_r(13, 7, 1), std::exception);
}

TEST(PiR, PermutationsCompose) {
  for (int p : {5, 7, 11, 13, 17, 19}) {
    long h = (p - 1) / 2;
    auto fold = [&](long x) {
      x = mod_floor(x, static_cast<long>(p));
      return x <= h ? x : p - x;
    };
    for (long r = 1; r <= h; ++r) {
      std::set<long> image;
      for (long i = 1; i <= h; ++i) {
        long j = pi_r(p, r, i);
        ASSERT_TRUE(mod_floor(r * j - i, static_cast<long>(p)) == 0 || mod_floor(r * j + i, static_cast<long>(p)) == 0);
        image.insert(j);
      }
      ASSERT_EQ(static_cast<long>(image.size()), h);
      for (long s = 1; s <= h; ++s)
        for (long i = 1; i <= h; ++i) ASSERT_EQ(pi_r(p, r, pi_r(p, s, i)), pi_r(p, fold(r * s), i));
    }
  }
}

TEST(JSeries, Examples) {
  // eta(11z)^3 / f_{11,1} = eta(11z)^2 / eta_{11,1}
  EtaVector v(11, {3, -1, 0, 0, 0, 0});
  EtaProduct F{{EtaAtom::eta(11), 2}, {EtaAtom::geta(11, 1), -1}};
  EXPECT_TRUE(qs_eq_to_order(j_series(v, 1, Rat(30)), product_series(F, Rat(30), 11), Rat(30)));
  // only n_0: independent of r
  EtaVector e(13, {4, 0, 0, 0, 0, 0, 0});
  for (long r = 1; r <= 6; ++r) EXPECT_TRUE(qs_eq_to_order(j_series(e, r, Rat(20)), qs_pow(eta_series(13, Rat(20), 13), 4), Rat(20)));
  EtaVector n1(13, {15, -1, -3, -2, -2, -2, -3});
  EXPECT_EQ(*j_series(n1, 1, Rat(10)).lead_exponent(), Rat(3));
  EXPECT_EQ(j_product(n1, 1).lead_exponent(), Rat(3));
}

TEST(JSeries, PermutedProduct) {
  EtaVector n1(13, {15, -1, -3, -2, -2, -2, -3});
  for (long r = 1; r <= 6; ++r) {
    EtaProduct F = j_product(n1, r);
    // j(p, pi_r(n), z) takes f_{13,rk} to the power n_k
    for (long k = 1; k <= 6; ++k) {
      EtaAtom a = EtaAtom::f(13, r * k);
      long found = 0;
      for (const auto& [atom, n] : F.factors)
        if (atom == a) found = n;
      EXPECT_EQ(found, n1.n[k]) << r << " " << k;
    }
  }
}
