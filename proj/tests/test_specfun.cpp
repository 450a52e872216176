#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mgwt/specfun.hpp"
#include "oracles.hpp"

using namespace mgwt;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

TEST(LogGamma, IntegerAndHalfValues) {
  EXPECT_EQ(log_gamma(1.0), 0.0);
  EXPECT_EQ(log_gamma(2.0), 0.0);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_NEAR(log_gamma(0.5), 0.5723649, 1e-7);
}

TEST(LogGamma, AgreesWithLibm) {
  for (double x : {0.01, 0.1, 0.3, 0.75, 1.5, 3.25, 7.7, 12.5, 47.3, 100.0, 1e3, 1e5, 1e6}) {
    const double ref = static_cast<double>(std::lgamma(static_cast<long double>(x)));
    EXPECT_NEAR(log_gamma(x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.5), DomainError);
}

TEST(Digamma, SeriesOracle) {
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-12);
  EXPECT_NEAR(digamma(0.5), -kEulerGamma - 2.0 * std::numbers::ln2, 1e-12);
  EXPECT_NEAR(digamma(0.5), -1.9635101, 1e-7);
  for (double x : {0.1, 0.7, 2.5, 5.9, 6.0, 13.0, 55.5}) {
    const double ref = static_cast<double>(oracle::digamma_series(x));
    EXPECT_NEAR(digamma(x), ref, 1e-10 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
}

TEST(Digamma, LargeArgumentAsymptotics) {
  const double x = 1000.0;
  EXPECT_NEAR(digamma(x), std::log(x) - 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x), 1e-13);
}

TEST(Digamma, RejectsNonPositive) { EXPECT_THROW(digamma(0.0), DomainError); }

TEST(Recurrences, HoldOnGrid) {
  for (double x = 0.1; x <= 100.0; x += 0.37) {
    EXPECT_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-10) << x;
    EXPECT_NEAR(log_gamma(x + 1.0), log_gamma(x) + std::log(x), 1e-10) << x;
  }
}

TEST(LogBinomial, SmallExact) {
  EXPECT_NEAR(log_binomial(8, 2), std::log2(28.0), 1e-12);
  EXPECT_NEAR(log_binomial(8, 2), 4.8073549, 1e-7);
  EXPECT_EQ(log_binomial(17, 0), 0.0);
  EXPECT_EQ(log_binomial(17, 17), 0.0);
}

TEST(LogBinomial, BigIntegerOracle) {
  const auto c = oracle::binomial128(100, 50);
  const long double exact = std::log2(static_cast<long double>(c));
  EXPECT_NEAR(log_binomial(100, 50), static_cast<double>(exact), 1e-8);
  for (unsigned k : {1u, 7u, 33u, 64u}) {
    const long double e = std::log2(static_cast<long double>(oracle::binomial128(120, k)));
    EXPECT_NEAR(log_binomial(120, k), static_cast<double>(e), 1e-8) << k;
  }
}

TEST(LogBinomial, HugeArgumentsStayFinite) {
  const double v = log_binomial(1'000'000, 500'000);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v / 1e6, 1.0, 1e-4);
}

TEST(LogBinomial, RejectsOutOfRange) {
  EXPECT_THROW(log_binomial(5, 6), DomainError);
  EXPECT_THROW(log_binomial(5, -1), DomainError);
}

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.2), -0.2 * std::log2(0.2) - 0.8 * std::log2(0.8), 1e-15);
  EXPECT_NEAR(binary_entropy(0.2), 0.7219281, 1e-7);
  EXPECT_THROW(binary_entropy(-0.01), DomainError);
  EXPECT_THROW(binary_entropy(1.01), DomainError);
}

TEST(BinaryEntropy, ExactSymmetry) {
  // dyadic q keeps 1 - q exact, so the two calls see identical operands
  for (int i = 0; i <= 1024; ++i) {
    const double q = i / 1024.0;
    EXPECT_EQ(binary_entropy(q), binary_entropy(1.0 - q)) << q;
  }
  for (double q = 0.0; q <= 1.0; q += 0.0137) {
    EXPECT_NEAR(binary_entropy(q), binary_entropy(1.0 - q), 1e-15) << q;
  }
}

TEST(Mu, Values) {
  EXPECT_NEAR(mu(1.0), -1.4426950, 1e-7);
  EXPECT_NEAR(mu(0.5), 0.5 * 1.0 - 0.5 * std::numbers::log2e, 1e-14);
  EXPECT_NEAR(mu(0.5), -0.2213475, 1e-7);
  EXPECT_NEAR(mu(1e-12), 0.0, 1e-11);
  EXPECT_NEAR(mu(0.4), -0.1349, 1e-4);
  EXPECT_NEAR(mu(1.0 - 1e-12), mu(1.0), 1e-9);
  EXPECT_THROW(mu(0.0), DomainError);
  EXPECT_THROW(mu(1.5), DomainError);
}

TEST(Mu, NegativeAndStrictlyDecreasing) {
  double prev = mu(1e-6);
  EXPECT_LT(prev, 0.0);
  for (double r = 0.01; r <= 1.0 + 1e-12; r += 0.01) {
    const double v = mu(std::min(r, 1.0));
    EXPECT_LT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(MixtureEntropy, DegenerateCases) {
  EXPECT_EQ(mixture_entropy_g(0.0, 0.3), 0.0);
  EXPECT_EQ(mixture_entropy_g(0.2, 0.0), binary_entropy(0.2));
  EXPECT_NEAR(mixture_entropy_g(0.2, 1e-6), 0.7219281, 1e-3);
}

// Frozen from an independent adaptive Gauss-Kronrod integration (QUADPACK,
// absolute and relative tolerance 1e-13) of the same mixture density.
TEST(MixtureEntropy, MatchesReferenceQuadrature) {
  EXPECT_NEAR(mixture_entropy_g(0.2, 0.2), 0.6928733201883374, 1e-8);
  EXPECT_NEAR(mixture_entropy_g(0.2, 0.1), 0.7119411106315384, 1e-8);
}

TEST(MixtureEntropy, MonteCarloOracle) {
  for (double rho_e : {0.2, 0.1}) {
    const auto mc = oracle::mixture_g_monte_carlo(0.2, rho_e, 1'000'000, 20261018);
    EXPECT_NEAR(mixture_entropy_g(0.2, rho_e), mc.g_bits, 3.0 * mc.std_error) << rho_e;
  }
}

TEST(MixtureEntropy, BoundedByBinaryEntropy) {
  for (int i = 0; i <= 10; ++i) {
    const double kappa = i / 10.0;
    for (int j = 1; j <= 10; ++j) {
      const double g = mixture_entropy_g(kappa, j / 10.0);
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, binary_entropy(kappa) + 1e-9);
    }
  }
}

TEST(MixtureEntropy, MonotoneOnGrid) {
  // nondecreasing in kappa on [0, 1/2], nonincreasing in rho_e
  for (int j = 1; j <= 10; ++j) {
    const double rho_e = j / 10.0;
    double prev = -1.0;
    for (int i = 0; i <= 9; ++i) {
      const double g = mixture_entropy_g(0.05 * i + (i == 0 ? 0.0 : 0.05), rho_e);
      EXPECT_GE(g, prev - 1e-9);
      prev = g;
    }
  }
  for (int i = 1; i <= 10; ++i) {
    const double kappa = 0.05 * i;
    double prev = 2.0;
    for (int j = 1; j <= 10; ++j) {
      const double g = mixture_entropy_g(kappa, j / 10.0);
      EXPECT_LE(g, prev + 1e-9);
      prev = g;
    }
  }
}

TEST(MixtureEntropy, RejectsBadArguments) {
  EXPECT_THROW(mixture_entropy_g(-0.1, 0.2), DomainError);
  EXPECT_THROW(mixture_entropy_g(0.2, 1.5), DomainError);
  QuadratureSpec narrow;
  narrow.half_width_sigmas = 3.0;
  EXPECT_THROW(mixture_entropy_g(0.2, 0.2, narrow), DomainError);
}

TEST(MixtureEntropy, NonConvergenceIsReported) {
  QuadratureSpec tight;
  tight.abs_tolerance = 1e-300;
  tight.max_subdivisions = 16;
  EXPECT_THROW(mixture_entropy_g(0.2, 0.2, tight), QuadratureError);
}

}  // namespace
