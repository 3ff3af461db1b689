#include <gtest/gtest.h>

#include <random>

#include "cranklab/qseries.hpp"
#include "oracles.hpp"

using namespace cranklab;

namespace {

CycNum one(int p) { return CycNum(p, 1); }

QSeries poly(int p, const std::vector<long>& c, long trunc) {
  QSeries s = QSeries::zero(p, Rat(trunc));
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i]) s.add_term(Rat(static_cast<long>(i)), CycNum(p, c[i]));
  return s;
}

QSeries random_series(std::mt19937& rng, int p, long D, long trunc_scaled, double density = 0.4) {
  QSeries s(p, D, trunc_scaled);
  std::uniform_real_distribution<double> u(0, 1);
  for (long e = -D; e < trunc_scaled; ++e)
    if (u(rng) < density) s.add_scaled(e, oracle::random_cyc(rng, p, 3));
  return s;
}

// exponents of eta(delta z): delta/24 + delta k(3k -+ 1)/2 with sign (-1)^k
std::map<Rat, long> pentagonal(long delta, const Rat& trunc) {
  std::map<Rat, long> m;
  for (long k = -40; k <= 40; ++k) {
    Rat e = Rat(delta, 24) + Rat(delta * k * (3 * k - 1), 2);
    if (e < trunc) m[e] = (k % 2 == 0) ? 1 : -1;
  }
  return m;
}

// f_{N,rho} by the triple product: q^{(N-2rho)^2/(8N)} sum (-1)^n q^{N n(n-1)/2 + rho n}
QSeries f_jtp(long N, long rho, long trunc, int p) {
  Rat lead((N - 2 * rho) * (N - 2 * rho), 8 * N);
  lead.canonicalize();
  QSeries out = QSeries::zero(p, Rat(trunc));
  for (long n = -60; n <= 60; ++n) {
    long e = N * n * (n - 1) / 2 + rho * n;
    if (e < 0) continue;
    Rat x = lead + e;
    if (x < Rat(trunc)) out += QSeries::monomial(CycNum(p, (n % 2 == 0) ? 1 : -1), x, Rat(trunc));
  }
  return out;
}

}  // namespace

TEST(QSeries, GeometricSeries) {
  QSeries a = poly(5, {1, -1}, 20);
  QSeries g = poly(5, std::vector<long>(20, 1), 20);
  QSeries prod = a * g;
  EXPECT_TRUE(qs_eq_to_order(prod, QSeries::monomial(one(5), 0, 20), 20));
  EXPECT_EQ(prod.trunc(), Rat(20));
  EXPECT_TRUE(qs_eq_to_order(qs_inv(a), g, 20));
}

TEST(QSeries, ShiftAddsToExponents) {
  QSeries a = poly(7, {1, 2, 3}, 3);
  QSeries s = qs_shift(a, Rat(1, 5));
  EXPECT_EQ(s.trunc(), Rat(16, 5));
  EXPECT_EQ(qs_coeff(s, Rat(1, 5)), CycNum(7, 1));
  EXPECT_EQ(qs_coeff(s, Rat(6, 5)), CycNum(7, 2));
  EXPECT_EQ(qs_coeff(s, Rat(11, 5)), CycNum(7, 3));
  EXPECT_EQ(s.size(), 3u);
}

TEST(QSeries, InverseOfEulerProductIsPartitionFunction) {
  QSeries e = qs_shift(eta_series(1, Rat(241, 24), 5), Rat(-1, 24));
  QSeries pgf = qs_inv(e);
  std::vector<long> want = {1, 1, 2, 3, 5, 7, 11};
  for (int n = 0; n < 10; ++n) {
    long count = oracle::partitions(n).size();
    if (n < 7) {
      EXPECT_EQ(count, want[n]);
    }
    EXPECT_EQ(qs_coeff(pgf, Rat(n)), CycNum(5, count)) << n;
  }
}

TEST(QSeries, PowAndInverse) {
  QSeries e = eta_series(1, Rat(30), 7);
  QSeries e24 = qs_pow(e, 24);
  for (const auto& [s, c] : e24.terms()) EXPECT_EQ(e24.exponent(s).get_den(), 1);
  EXPECT_EQ(*e24.lead_exponent(), Rat(1));
  // Ramanujan tau: q - 24 q^2 + 252 q^3 - 1472 q^4 + 4830 q^5
  std::vector<long> tau = {1, -24, 252, -1472, 4830, -6048, -16744};
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(qs_coeff(e24, Rat(n)), CycNum(7, tau[n - 1]));
  QSeries back = qs_pow(e24, -1) * e24;
  EXPECT_TRUE(qs_eq_to_order(back, QSeries::monomial(one(7), 0, back.trunc()), back.trunc()));
}

TEST(QSeries, InvertingNothingThrows) {
  EXPECT_THROW(qs_inv(QSeries::zero(5, Rat(4))), std::exception);
}

TEST(QSeries, CoefficientLookup) {
  QSeries e = eta_series(1, Rat(10), 5);
  EXPECT_EQ(qs_coeff(e, Rat(1, 24)), one(5));
  EXPECT_TRUE(qs_coeff(e, Rat(1, 2)).is_zero());
  EXPECT_THROW(qs_coeff(e, Rat(10)), std::out_of_range);
  EXPECT_TRUE(qs_eq_to_order(e, e, Rat(7, 3)));
  EXPECT_THROW(qs_eq_to_order(e, e, Rat(11)), std::out_of_range);
}

TEST(QSeries, TruncationPropagates) {
  QSeries a = QSeries::zero(5, Rat(10)) + QSeries::monomial(one(5), Rat(1), Rat(10));
  QSeries b = QSeries::monomial(one(5), Rat(2), Rat(5));
  QSeries prod = a * b;
  // a known below q^10 with lead 1, b below q^5 with lead 2: product known below q^6
  EXPECT_EQ(prod.trunc(), Rat(6));
  EXPECT_EQ((a + b).trunc(), Rat(5));
}

TEST(QSeries, NoStoredZeros) {
  QSeries a = poly(5, {1, 2, 3}, 10);
  QSeries d = a - a;
  EXPECT_TRUE(d.empty());
  for (const auto& [e, c] : (a * a).terms()) EXPECT_FALSE(c.is_zero());
}

TEST(QSeries, RingLawsRandom) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    int p = (i % 2) ? 5 : 7;
    long Da = 1 + rng() % 4, Db = 1 + rng() % 6, Dc = 1 + rng() % 3;
    QSeries a = random_series(rng, p, Da, 6 * Da), b = random_series(rng, p, Db, 5 * Db),
            c = random_series(rng, p, Dc, 7 * Dc);
    QSeries l = (a * b) * c, r = a * (b * c);
    Rat t = std::min(l.trunc(), r.trunc());
    ASSERT_TRUE(qs_eq_to_order(l, r, t));
    QSeries dl = a * (b + c), dr = a * b + a * c;
    t = std::min(dl.trunc(), dr.trunc());
    ASSERT_TRUE(qs_eq_to_order(dl, dr, t));
  }
}

TEST(QSeries, MultiplicationAgainstComplexEvaluation) {
  // finite products of polynomials evaluated at a point are exact homomorphisms
  std::mt19937 rng(13);
  for (int i = 0; i < 20; ++i) {
    QSeries a = random_series(rng, 11, 1, 8, 0.8), b = random_series(rng, 11, 1, 8, 0.8);
    a = a.truncated(4);
    b = b.truncated(4);
    QSeries big_a(11, 1, 40), big_b(11, 1, 40);
    for (const auto& [e, c] : a.terms()) big_a.add_scaled(e + 1, c);
    for (const auto& [e, c] : b.terms()) big_b.add_scaled(e + 1, c);
    QSeries prod = big_a * big_b;
    std::complex<double> x(0.3, 0.2), va = 0, vb = 0, vp = 0;
    for (const auto& [e, c] : big_a.terms()) va += c.embed() * std::pow(x, e);
    for (const auto& [e, c] : big_b.terms()) vb += c.embed() * std::pow(x, e);
    for (const auto& [e, c] : prod.terms()) vp += c.embed() * std::pow(x, e);
    EXPECT_NEAR(std::abs(vp - va * vb), 0, 1e-9);
  }
}

TEST(QSeries, EtaSeriesPentagonal) {
  for (long delta : {1, 2, 5, 13}) {
    Rat t(60);
    QSeries e = eta_series(delta, t, 5);
    auto want = pentagonal(delta, t);
    EXPECT_EQ(e.size(), want.size());
    for (const auto& [x, s] : want) EXPECT_EQ(qs_coeff(e, x), CycNum(5, s));
  }
  EXPECT_EQ(*eta_series(25, Rat(5), 5).lead_exponent(), Rat(25, 24));
  // the product route agrees with the pentagonal route
  QSeries e = eta_series(3, Rat(50), 7);
  QSeries viaprod = product_series(EtaProduct{{EtaAtom::eta(3), 1}, {EtaAtom::eta(1), 1}}, Rat(50), 7);
  EXPECT_TRUE(qs_eq_to_order(e * eta_series(1, Rat(50), 7), viaprod, Rat(50)));
}

TEST(QSeries, GetaLeadingExponents) {
  EXPECT_EQ(EtaAtom::geta(5, 1).lead_exponent(), Rat(1, 60));
  // 5 (4/25 - 2/5 + 1/6) / 2
  EXPECT_EQ(EtaAtom::geta(5, 2).lead_exponent(), Rat(5, 2) * (Rat(4, 25) - Rat(2, 5) + Rat(1, 6)));
  EXPECT_EQ(EtaAtom::geta(5, 2).lead_exponent(), Rat(-11, 60));
  EXPECT_EQ(*geta_series(5, 2, Rat(10), 5).lead_exponent(), Rat(-11, 60));
  EXPECT_THROW(geta_series(5, 10, Rat(10), 5), std::exception);
}

TEST(QSeries, FLeadingExponentsAndReduction) {
  EXPECT_EQ(*f_series(5, 1, Rat(20), 5).lead_exponent(), Rat(9, 40));
  EXPECT_EQ(*f_series(11, 5, Rat(20), 11).lead_exponent(), Rat(1, 88));
  EXPECT_TRUE(qs_eq_to_order(f_series(5, 6, Rat(30), 5), f_series(5, 1, Rat(30), 5), Rat(30)));
  EXPECT_TRUE(qs_eq_to_order(f_series(7, -2, Rat(30), 7), f_series(7, 2, Rat(30), 7), Rat(30)));
  EXPECT_THROW(f_series(5, 10, Rat(10), 5), std::exception);
}

TEST(QSeries, FIsProductOfEtaAndGeta) {
  for (long N : {5, 11, 13}) {
    for (long rho = 1; rho <= N / 2; ++rho) {
      Rat t(50);
      QSeries lhs = f_series(N, rho, t, 5);
      QSeries rhs = eta_series(N, t + 2, 5) * geta_series(N, rho, t + 2, 5);
      EXPECT_TRUE(qs_eq_to_order(lhs, rhs, t)) << N << " " << rho;
    }
  }
}

TEST(QSeries, FMatchesTripleProduct) {
  for (long N = 5; N <= 13; ++N) {
    for (long rho = 1; rho <= N / 2; ++rho) {
      QSeries f = f_series(N, rho, Rat(50), 5);
      QSeries jtp = f_jtp(N, rho, 50, 5);
      ASSERT_TRUE(qs_eq_to_order(f, jtp, Rat(50))) << N << " " << rho;
      // rho = N/2 repeats a factor, and q^{3n^2} then collects -2 at n = +-1
      if (2 * rho == N) continue;
      for (const auto& [e, c] : f.terms()) {
        ASSERT_TRUE(c == CycNum(5, 1) || c == CycNum(5, -1)) << N << " " << rho << " " << c.str() << " at " << f.exponent(e);
      }
    }
  }
}

TEST(QSeries, ESeriesMatchesProductOracle) {
  const int p = 11;
  const int n = 30;
  for (long g = 0; g < p; ++g) {
    for (long h : {0L, 1L, 4L}) {
      if (g == 0 && h == 0) continue;
      // E_{g,h} = q^{B(g/p)/2} prod_{m>=1} (1 - zeta^h q^{m-1+g/p})(1 - zeta^{-h} q^{m-g/p})
      // with exponents scaled by p
      oracle::GR gr(p, n * p);
      CycNum constant(p, 1);
      for (long m = 1; m <= n; ++m) {
        long e1 = p * (m - 1) + g, e2 = p * m - g;
        if (e1 == 0) constant = CycNum(p, 1) - CycNum::zeta_pow(p, h);
        else if (e1 < n * p) gr.mul(static_cast<int>(e1), h, 1);
        if (e2 < n * p) gr.mul(static_cast<int>(e2), -h, 1);
      }
      Rat lead = bernoulli_p2(Rat(g, p)) / 2;
      QSeries s = E_series(p, g, h, lead + n);
      for (int i = 0; i < n * p; ++i) {
        ASSERT_EQ(qs_coeff(s, lead + Rat(i, p)), gr.coeff(i) * constant) << g << " " << h << " " << i;
      }
    }
  }
}

TEST(QSeries, EZeroEllLeadingTerm) {
  for (long ell = 1; ell < 13; ++ell) {
    QSeries s = E_series(13, 0, ell, Rat(5));
    EXPECT_EQ(*s.lead_exponent(), Rat(1, 12));
    EXPECT_EQ(qs_coeff(s, Rat(1, 12)), CycNum(13, 1) - CycNum::zeta_pow(13, ell));
  }
}

TEST(QSeries, GetaIsDilatedE) {
  for (long N : {5, 7, 11}) {
    for (long k = 1; k < N; ++k) {
      Rat t(50);
      QSeries lhs = geta_series(N, k, t, N);
      QSeries rhs = E_series(N, k, 0, t, N);
      EXPECT_TRUE(qs_eq_to_order(lhs, rhs, t)) << N << " " << k;
    }
  }
}

TEST(QSeries, EReductionRelations) {
  const int p = 13;
  Rat t(20);
  for (long g = 1; g < p; ++g) {
    for (long h = 0; h < p; ++h) {
      QSeries base = E_series(p, g, h, t);
      CycNum u = -CycNum::zeta_pow(p, -h);
      QSeries shifted = product_series(EtaProduct{{EtaAtom::E(p, g + p, h), 1}}, t, p);
      ASSERT_TRUE(qs_eq_to_order(shifted, qs_scale(base, u), t)) << g << " " << h;
      QSeries neg = product_series(EtaProduct{{EtaAtom::E(p, -g, -h), 1}}, t, p);
      ASSERT_TRUE(qs_eq_to_order(neg, qs_scale(base, u), t)) << g << " " << h;
    }
  }
}

TEST(QSeries, DumpFormat) {
  std::string d = qs_dump(eta_series(1, Rat(3), 5));
  EXPECT_EQ(d, "1/24\t[1,0,0,0]\n25/24\t[-1,0,0,0]\n49/24\t[-1,0,0,0]\n");
}

TEST(QSeries, EtaProductWeight) {
  EtaProduct F{{EtaAtom::eta(13), 15}, {EtaAtom::f(13, 1), -1}, {EtaAtom::geta(13, 2), 4}};
  EXPECT_EQ(F.weight(), Rat(7));
  EXPECT_EQ(F.lead_exponent(), Rat(15 * 13, 24) - EtaAtom::f(13, 1).lead_exponent() +
                                   4 * EtaAtom::geta(13, 2).lead_exponent());
}
