#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mgwt/verify.hpp"
#include "oracles.hpp"

using namespace mgwt;

namespace {

TEST(ChisqTail, BoundHoldsOnGrid) {
  for (std::size_t d : {10u, 50u, 200u}) {
    for (double eps : {0.1, 0.3, 0.45}) {
      const auto r = chisq_tail_check(d, eps, 20000, {d, 1});
      EXPECT_LE(r.empirical_tail, r.lemma_bound + 3.0 * r.binomial_se) << d << " " << eps;
      EXPECT_DOUBLE_EQ(r.lemma_bound, std::exp(-3.0 / 16.0 * d * eps * eps));
      EXPECT_EQ(r.trials, 20000u);
    }
  }
}

TEST(ChisqTail, FarTailIsEmpty) {
  const auto r = chisq_tail_check(400, 0.499, 2000, {3, 0});
  EXPECT_NEAR(std::log(r.lemma_bound), -3.0 / 16.0 * 400 * 0.499 * 0.499, 1e-12);
  EXPECT_EQ(r.empirical_tail, 0.0);
}

TEST(ChisqTail, DeterministicAndDomain) {
  EXPECT_EQ(chisq_tail_check(5, 0.2, 3000, {1, 0}).empirical_tail,
            chisq_tail_check(5, 0.2, 3000, {1, 0}).empirical_tail);
  EXPECT_THROW(chisq_tail_check(5, 0.5, 10, {1, 0}), DomainError);
  EXPECT_THROW(chisq_tail_check(0, 0.2, 10, {1, 0}), DomainError);
}

TEST(WishartMean, ExactValues) {
  // m = 1, n = 2: (1/2) log2(e) psi(1)
  EXPECT_NEAR(wishart_logdet_mean_exact({1, 2, 0.0}), 0.5 * kLog2E * -0.5772156649015329, 1e-12);
  EXPECT_NEAR(wishart_logdet_mean_exact({1, 2, 0.0}), -0.4163731, 1e-7);
  EXPECT_NEAR(wishart_logdet_mean_exact({100, 200, 0.0}), mu(0.5), 0.02);
  // square matrices converge slowly: the gap is about log2(e) ln(n) / (2n)
  EXPECT_NEAR(wishart_logdet_mean_exact({200, 200, 0.0}), mu(1.0), 0.021);
  EXPECT_NEAR(wishart_logdet_mean_exact({400, 400, 0.0}), mu(1.0), 0.012);
  EXPECT_THROW(wishart_logdet_mean_exact({3, 2, 0.0}), DomainError);
}

TEST(WishartMean, GapToLimitShrinks) {
  for (double rho : {0.25, 0.5, 1.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 8; n <= 512; n *= 2) {
      const auto m = static_cast<std::size_t>(rho * n);
      const double gap = std::abs(wishart_logdet_mean_exact({m, n, 0.0}) - mu(rho));
      EXPECT_LT(gap, prev) << rho << " " << n;
      prev = gap;
    }
  }
}

TEST(WishartStats, MatchesDigammaOracle) {
  const WishartSpec grid[] = {{1, 1, 0.0}, {5, 10, 0.0}, {20, 40, 0.0}, {50, 100, 0.0}, {100, 100, 0.0}};
  for (const auto& s : grid) {
    const std::size_t trials = s.m == 1 ? 20000 : 200;
    const auto r = wishart_logdet_stats(s, trials, {s.m * 1000 + s.n, 0});
    EXPECT_NEAR(r.mean, wishart_logdet_mean_exact(s), 3.0 * r.std_error) << s.m << "x" << s.n;
    EXPECT_EQ(r.trials, trials);
    EXPECT_LE(r.min, r.mean);
    EXPECT_GE(r.max, r.mean);
  }
  // m = n = 1: log2 of a chi-square(1) variable, mean (psi(1/2) + ln 2) / ln 2
  EXPECT_NEAR(wishart_logdet_mean_exact({1, 1, 0.0}),
              (static_cast<double>(oracle::digamma_series(0.5L)) + kLn2) * kLog2E, 1e-10);
}

TEST(NegMoment, TelescopingOracle) {
  // integer r: ln Gamma(z) - ln Gamma(z - 1) = ln(z - 1)
  const double m1 = 2.0 * std::log(2.0) + std::log(4.0) + std::log(3.5);
  EXPECT_NEAR(wishart_neg_moment_exact({2, 10, 1.0}), -m1, 1e-12);
  const double m2 = 2.0 * 3.0 * std::log(2.0) + std::log(5.0 * 4.0) + std::log(4.5 * 3.5) + std::log(4.0 * 3.0);
  EXPECT_NEAR(wishart_neg_moment_exact({3, 12, 2.0}), -m2, 1e-11);
}

TEST(NegMoment, SmallOrderLimit) {
  EXPECT_EQ(wishart_neg_moment_exact({2, 10, 0.0}), 0.0);
  EXPECT_NEAR(wishart_neg_moment_exact({2, 10, 1e-9}), 0.0, 1e-8);
  EXPECT_LT(std::abs(wishart_neg_moment_exact({2, 10, 1e-4})), std::abs(wishart_neg_moment_exact({2, 10, 1e-2})));
}

TEST(NegMoment, DomainErrors) {
  EXPECT_THROW(wishart_neg_moment_exact({2, 10, 4.0}), DomainError);
  EXPECT_THROW(wishart_neg_moment_exact({2, 10, -1.0}), DomainError);
  EXPECT_THROW(wishart_neg_moment_mc({2, 10, 0.0}, 10, {1, 0}), DomainError);
}

TEST(NegMoment, MonteCarloAgrees) {
  const WishartSpec s{2, 10, 1.0};
  const auto est = wishart_neg_moment_mc(s, 100000, {31, 0});
  EXPECT_FALSE(est.heavy_tailed);
  EXPECT_NEAR(est.stats.mean, std::exp(wishart_neg_moment_exact(s)), 3.0 * est.stats.std_error);
  const auto again = wishart_neg_moment_mc(s, 1000, {31, 0});
  EXPECT_EQ(again.stats.mean, wishart_neg_moment_mc(s, 1000, {31, 0}).stats.mean);
  EXPECT_TRUE(wishart_neg_moment_mc({2, 10, 3.5}, 100, {1, 0}).heavy_tailed);
}

TEST(Colnorm, ExtremeValueForSingleRow) {
  const std::vector<std::size_t> ps{2000};
  const auto r = colnorm_max_trend(ps, 0.0005, 200, {7, 0});  // m_b = 1
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].m_b, 1u);
  EXPECT_NEAR(r[0].max_norm.mean, 2.0 * std::log(2000.0), 0.3 * 2.0 * std::log(2000.0));
}

TEST(Colnorm, ExcessShrinksWithSize) {
  const std::vector<std::size_t> ps{100, 400, 1600};
  const auto r = colnorm_max_trend(ps, 0.2, 60, {8, 0});
  EXPECT_GT(r[0].excess.mean, r[1].excess.mean);
  EXPECT_GT(r[1].excess.mean, r[2].excess.mean);
  EXPECT_EQ(r[2].m_b, 320u);
  const auto again = colnorm_max_trend(ps, 0.2, 60, {8, 0});
  EXPECT_EQ(r[2].excess.mean, again[2].excess.mean);
}

TEST(MinSupportLogdet, FullSupportCase) {
  const auto a = sample_gaussian_matrix(3, 9, {1, 0});
  EXPECT_NEAR(min_support_logdet(a, 9), gram_logdet(a, Support::full(9), 9.0) / 9.0, 1e-15);
}

TEST(MinSupportLogdet, MatchesExhaustiveOracle) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t p = 8, m = 2 + seed % 2;
    const auto a = sample_gaussian_matrix(m, p, {seed, 3});
    const std::vector<double> raw(a.data().begin(), a.data().end());
    for (std::size_t k = m; k <= p; ++k) {
      long double best = std::numeric_limits<long double>::infinity();
      for (const auto& s : oracle::subsets(p, k)) {
        best = std::min(best, std::log2(oracle::cofactor_det(oracle::gram(raw, m, p, s))) -
                                  m * std::log2(static_cast<long double>(k)));
      }
      EXPECT_NEAR(min_support_logdet(a, k), static_cast<double>(best / p), 1e-9) << seed << " " << k;
    }
  }
}

TEST(MinSupportLogdet, SampledIsUpperBoundAndDeterministic) {
  const auto a = sample_gaussian_matrix(3, 14, {2, 0});
  const double exact = min_support_logdet(a, 5);
  const Sample s{200, {4, 0}};
  const double sampled = min_support_logdet(a, 5, s);
  EXPECT_GE(sampled, exact);
  EXPECT_EQ(sampled, min_support_logdet(a, 5, s));
  EXPECT_THROW(min_support_logdet(a, 2), DomainError);
  EXPECT_THROW(min_support_logdet(sample_gaussian_matrix(3, 60, {1, 0}), 30), TooManySupports);
}

TEST(HxzShadow, EmptySupport) {
  const auto a = sample_gaussian_matrix(4, 10, {5, 0});
  const std::vector<double> z(4, 0.0);
  const auto e = hxz_shadow(a, Support::empty(10), z, 0.3, 0.2);
  for (double s : e.sigma_sq) EXPECT_EQ(s, 0.0);
  EXPECT_DOUBLE_EQ(e.max_sigma_dev, 1.5);
  for (double v : e.xhat) EXPECT_EQ(v, 0.0);
}

TEST(HxzShadow, OrthogonalColumns) {
  // [2I 0]: the nonzero columns are orthogonal, the zero ones are orthogonal to everything
  Matrix a(3, 5);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) = 2.0;
  const std::vector<double> z{1.0, -2.0, 0.5};
  const auto e = hxz_shadow(a, Support(5, {0, 1, 2}), z, 0.6, 0.6);
  for (double s : e.sigma_sq) EXPECT_EQ(s, 0.0);
  EXPECT_DOUBLE_EQ(e.xhat[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(e.xhat[1], -4.0 / 3.0);
  EXPECT_EQ(e.xhat[4], 0.0);
  EXPECT_DOUBLE_EQ(e.max_colnorm_dev, 1.0);  // columns 3, 4 have zero norm
}

TEST(HxzShadow, InterferenceVarianceFormula) {
  const auto a = sample_gaussian_matrix(3, 6, {12, 0});
  const Support x(6, {1, 3, 4});
  const std::vector<double> z{0.1, 0.2, 0.3};
  const auto e = hxz_shadow(a, x, z, 0.5, 0.5);
  for (std::size_t i = 0; i < 6; ++i) {
    double s = 0.0;
    for (std::size_t j : x.indices()) {
      if (j == i) continue;
      double ip = 0.0;
      for (std::size_t r = 0; r < 3; ++r) ip += a(r, i) * a(r, j);
      s += ip * ip;
    }
    EXPECT_NEAR(e.sigma_sq[i], s / 9.0, 1e-12);
  }
}

TEST(HxzShadow, DimensionChecks) {
  const auto a = sample_gaussian_matrix(3, 6, {1, 0});
  const std::vector<double> z(2, 0.0);
  EXPECT_THROW(hxz_shadow(a, Support::empty(6), z, 0.1, 0.1), DimensionMismatch);
  const std::vector<double> z3(3, 0.0);
  EXPECT_THROW(hxz_shadow(a, Support::empty(5), z3, 0.1, 0.1), DimensionMismatch);
}

TEST(HxzTrend, SigmaDeviationShrinks) {
  const std::vector<std::size_t> ps{200, 400, 800};
  const auto r = hxz_trend(ps, 0.1, 0.15, 100, {13, 0});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].m_e, 20u);
  EXPECT_EQ(r[0].k, 30u);
  EXPECT_GT(r[0].sigma_dev.mean, r[1].sigma_dev.mean);
  EXPECT_GT(r[1].sigma_dev.mean, r[2].sigma_dev.mean);
  EXPECT_GT(r[0].colnorm_dev.mean, r[2].colnorm_dev.mean);
}

}  // namespace
