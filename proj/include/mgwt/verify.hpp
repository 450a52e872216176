#pragma once

/// @file
/// Monte Carlo and exact-moment checks of the random-matrix facts behind
/// the asymptotic bounds: chi-square tails, Wishart log-determinant
/// concentration and negative moments, column-norm maxima, support-minimized
/// log-determinants and the eavesdropper-side matched-filter statistics.
///
/// Every Monte Carlo routine draws trial t from rng.substream(t) (or a
/// substream of it) and reduces in trial order, so results are bit-identical
/// for any worker count.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mgwt/bounds_finite.hpp"
#include "mgwt/errors.hpp"
#include "mgwt/matrix.hpp"
#include "mgwt/random.hpp"
#include "mgwt/specfun.hpp"
#include "mgwt/stats.hpp"
#include "mgwt/support.hpp"

namespace mgwt {

namespace detail {

// round(ratio * p) and ceil(ratio * p), robust to products like 0.15 * 200.
inline std::size_t round_ratio(double ratio, std::size_t p) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(p)));
}
inline std::size_t ceil_ratio(double ratio, std::size_t p) {
  return static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(p) - 1e-9));
}

}  // namespace detail

/// m x m Wishart matrix with n degrees of freedom; `r` is a moment order.
struct WishartSpec {
  std::size_t m = 1;
  std::size_t n = 1;
  double r = 0.0;

  void validate() const {
    detail::require(m >= 1, "WishartSpec: need m >= 1");
    detail::require(n >= m, "WishartSpec: need n >= m");
  }
  [[nodiscard]] double moment_limit() const { return (static_cast<double>(n) - static_cast<double>(m)) / 2.0; }
};

// ---------------------------------------------------------------------------
// Chi-square tail

struct ChisqTailResult {
  double empirical_tail = 0.0;
  double lemma_bound = 0.0;
  double binomial_se = 0.0;  ///< sqrt(q (1 - q) / trials) with q = lemma_bound
  std::size_t trials = 0;
};

/// Fraction of chi-square(d) samples at or above d (1 + eps), against the
/// bound exp(-(3/16) d eps^2). Each sample is a sum of d squared normals.
inline ChisqTailResult chisq_tail_check(std::size_t d, double eps, std::size_t trials, SeededStream rng) {
  detail::require(d >= 1, "chisq_tail_check: need d >= 1");
  detail::require(eps > 0.0 && eps < 0.5, "chisq_tail_check: need 0 < eps < 1/2");
  detail::require(trials >= 1, "chisq_tail_check: need trials >= 1");
  const double dd = static_cast<double>(d);
  const double threshold = dd * (1.0 + eps);
  const auto hits = parallel_map(trials, [&](std::size_t t) {
    Generator gen(rng.substream(t));
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double z = gen.normal();
      s += z * z;
    }
    return s >= threshold ? 1.0 : 0.0;
  });
  ChisqTailResult out;
  out.trials = trials;
  out.empirical_tail = compensated_sum(hits) / static_cast<double>(trials);
  out.lemma_bound = std::exp(-3.0 / 16.0 * dd * eps * eps);
  out.binomial_se = std::sqrt(out.lemma_bound * (1.0 - out.lemma_bound) / static_cast<double>(trials));
  return out;
}

// ---------------------------------------------------------------------------
// Wishart log-determinant

/// Statistics of (1/n) log2 det(W / n), W = G G^T with G an m x n Gaussian.
inline TrialReport wishart_logdet_stats(const WishartSpec& spec, std::size_t trials, SeededStream rng) {
  spec.validate();
  detail::require(trials >= 1, "wishart_logdet_stats: need trials >= 1");
  const Support full = Support::full(spec.n);
  const double n = static_cast<double>(spec.n);
  const auto values = parallel_map(trials, [&](std::size_t t) {
    const Matrix g = sample_gaussian_matrix(spec.m, spec.n, rng.substream(t));
    return gram_logdet(g, full, n) / n;
  });
  return TrialReport::from_samples(values, rng.seed);
}

/// Exact E[(1/n) log2 det(W / n)]:
///   (1/n) (m + log2(e) sum_{i=1}^m psi((n - i + 1) / 2) - m log2 n).
inline double wishart_logdet_mean_exact(const WishartSpec& spec) {
  spec.validate();
  const double n = static_cast<double>(spec.n);
  const double m = static_cast<double>(spec.m);
  CompensatedSum s;
  for (std::size_t i = 1; i <= spec.m; ++i) s.add(digamma((n - static_cast<double>(i) + 1.0) / 2.0));
  return (m + kLog2E * s.value() - m * std::log2(n)) / n;
}

/// ln E[det(W)^{-r}] = -M(r), with
///   M(r) = r m ln 2 + sum_{i=0}^{m-1} [ln Gamma((n-i)/2) - ln Gamma((n-i)/2 - r)].
/// Exists only for 0 <= r < (n - m) / 2.
inline double wishart_neg_moment_exact(const WishartSpec& spec) {
  spec.validate();
  if (!(spec.r >= 0.0 && spec.r < spec.moment_limit())) {
    throw DomainError("wishart_neg_moment_exact: need 0 <= r < (n - m) / 2");
  }
  if (spec.r == 0.0) return 0.0;
  CompensatedSum s;
  s.add(spec.r * static_cast<double>(spec.m) * kLn2);
  for (std::size_t i = 0; i < spec.m; ++i) {
    const double z = (static_cast<double>(spec.n) - static_cast<double>(i)) / 2.0;
    s.add(log_gamma(z) - log_gamma(z - spec.r));
  }
  return -s.value();
}

struct NegMomentEstimate {
  TrialReport stats;
  /// det(W)^{-r} has infinite variance once 2r >= (n - m) / 2; the standard
  /// error is then not meaningful.
  bool heavy_tailed = false;
};

/// Monte Carlo E[det(W)^{-r}] with per-trial value exp(-r ln det W).
inline NegMomentEstimate wishart_neg_moment_mc(const WishartSpec& spec, std::size_t trials, SeededStream rng) {
  spec.validate();
  if (!(spec.r > 0.0 && spec.r < spec.moment_limit())) {
    throw DomainError("wishart_neg_moment_mc: need 0 < r < (n - m) / 2");
  }
  detail::require(trials >= 1, "wishart_neg_moment_mc: need trials >= 1");
  const Support full = Support::full(spec.n);
  const auto values = parallel_map(trials, [&](std::size_t t) {
    const Matrix g = sample_gaussian_matrix(spec.m, spec.n, rng.substream(t));
    return std::exp(-spec.r * gram_logdet_nats_unnormalized(g, full));
  });
  return {TrialReport::from_samples(values, rng.seed), 2.0 * spec.r >= spec.moment_limit()};
}

// ---------------------------------------------------------------------------
// Column norms

struct ColnormTrend {
  std::size_t p = 0;
  std::size_t m_b = 0;
  TrialReport max_norm;  ///< max_i (1/m_b) ||A(i)||^2
  TrialReport excess;    ///< (max_i (1/m_b) ||A(i)||^2 - 1)_+
};

/// For each p, statistics of max_column_norm_sq over Gaussian m_b x p
/// matrices, m_b = round(rho_b p). Size p uses rng.substream(p).
inline std::vector<ColnormTrend> colnorm_max_trend(std::span<const std::size_t> p_list, double rho_b,
                                                   std::size_t trials, SeededStream rng) {
  detail::require(rho_b > 0.0 && rho_b <= 0.5, "colnorm_max_trend: need 0 < rho_b <= 1/2");
  detail::require(trials >= 1, "colnorm_max_trend: need trials >= 1");
  std::vector<ColnormTrend> out;
  for (std::size_t p : p_list) {
    const std::size_t m_b = detail::round_ratio(rho_b, p);
    detail::require(m_b >= 1, "colnorm_max_trend: round(rho_b p) must be at least 1");
    const SeededStream ps = rng.substream(p);
    const auto maxima = parallel_map(trials, [&](std::size_t t) {
      return max_column_norm_sq(sample_gaussian_matrix(m_b, p, ps.substream(t)));
    });
    std::vector<double> excess(maxima.size());
    std::transform(maxima.begin(), maxima.end(), excess.begin(),
                   [](double v) { return std::max(v - 1.0, 0.0); });
    out.push_back({p, m_b, TrialReport::from_samples(maxima, rng.seed),
                   TrialReport::from_samples(excess, rng.seed)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Support-minimized log-determinant

/// min over x in X_k^p of (1/p) log2 det(A(x) A(x)^T / k). Sampled mode
/// returns the minimum over the drawn supports, which is an upper bound on
/// the true minimum. A singular Gram yields -infinity.
inline double min_support_logdet(const Matrix& a, std::size_t k, const SupportMode& mode = Enumerate{}) {
  detail::require(k >= a.rows(), "min_support_logdet: need k >= rows");
  detail::require(k <= a.cols(), "min_support_logdet: need k <= cols");
  if (const auto* s = std::get_if<Sample>(&mode)) {
    detail::require(s->n >= 1, "min_support_logdet: sample count must be positive");
  }
  return detail::min_gram_logdet(a, k, mode).value / static_cast<double>(a.cols());
}

// ---------------------------------------------------------------------------
// Eavesdropper matched filter

/// Matched-filter estimate X_hat = (1/m_e) A_e^T z and interference variances
///   sigma_i^2 = (1/m_e^2) sum_{j in x, j != i} <A_e(i), A_e(j)>^2
/// together with their worst-case deviations from the limits 1 and kappa / rho_e.
struct ShadowEstimate {
  std::vector<double> xhat;
  std::vector<double> sigma_sq;
  double max_colnorm_dev = 0.0;  ///< max_i | ||A_e(i)||^2 / m_e - 1 |
  double max_sigma_dev = 0.0;    ///< max_i | sigma_i^2 - kappa / rho_e |
};

inline ShadowEstimate hxz_shadow(const Matrix& a_e, const Support& x, std::span<const double> z,
                                 double kappa, double rho_e) {
  const std::size_t m = a_e.rows();
  const std::size_t p = a_e.cols();
  if (x.ambient() != p) throw DimensionMismatch("hxz_shadow: support ambient != cols");
  if (z.size() != m) throw DimensionMismatch("hxz_shadow: z length != rows");
  detail::require(m >= 1, "hxz_shadow: need at least one row");
  detail::require(rho_e > 0.0, "hxz_shadow: need rho_e > 0");
  detail::require(kappa >= 0.0 && kappa <= 1.0, "hxz_shadow: need kappa in [0, 1]");

  const double md = static_cast<double>(m);
  const auto a = a_e.view();
  ShadowEstimate out;
  out.xhat.resize(p);
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(m));
  Eigen::Map<Eigen::VectorXd>(out.xhat.data(), static_cast<Eigen::Index>(p)) = a.transpose() * zv / md;

  out.sigma_sq.assign(p, 0.0);
  if (x.weight() > 0) {
    // Inner products <A(i), A(j)> for all i and j in x.
    const Eigen::MatrixXd b = detail::gather_columns(a_e, x);
    const Eigen::MatrixXd inner = a.transpose() * b;
    const auto& idx = x.indices();
    for (std::size_t i = 0; i < p; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] == i) continue;
        const double v = inner(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        s += v * v;
      }
      out.sigma_sq[i] = s / (md * md);
    }
  }

  const auto norms = column_norms_sq(a_e);
  const double target = kappa / rho_e;
  for (std::size_t i = 0; i < p; ++i) {
    out.max_colnorm_dev = std::max(out.max_colnorm_dev, std::abs(norms[i] / md - 1.0));
    out.max_sigma_dev = std::max(out.max_sigma_dev, std::abs(out.sigma_sq[i] - target));
  }
  return out;
}

struct HxzTrend {
  std::size_t p = 0;
  std::size_t m_e = 0;
  std::size_t k = 0;
  TrialReport sigma_dev;
  TrialReport colnorm_dev;
};

/// For each p: Gaussian A_e (m_e = round(rho_e p)), a uniform support of
/// weight ceil(kappa p), Gaussian multiplicative noise, and the resulting
/// hxz_shadow deviations. Trial t at size p uses rng.substream(p).substream(t).
inline std::vector<HxzTrend> hxz_trend(std::span<const std::size_t> p_list, double rho_e, double kappa,
                                       std::size_t trials, SeededStream rng) {
  detail::require(rho_e > 0.0 && rho_e <= 1.0, "hxz_trend: need 0 < rho_e <= 1");
  detail::require(kappa >= 0.0 && kappa <= 1.0, "hxz_trend: need kappa in [0, 1]");
  detail::require(trials >= 1, "hxz_trend: need trials >= 1");
  std::vector<HxzTrend> out;
  for (std::size_t p : p_list) {
    const std::size_t m_e = detail::round_ratio(rho_e, p);
    const std::size_t k = std::min(p, detail::ceil_ratio(kappa, p));
    detail::require(m_e >= 1, "hxz_trend: round(rho_e p) must be at least 1");
    const SeededStream ps = rng.substream(p);
    struct Pair {
      double sigma = 0.0;
      double colnorm = 0.0;
    };
    const auto devs = parallel_map(trials, [&](std::size_t t) {
      const SeededStream ts = ps.substream(t);
      const Matrix a = sample_gaussian_matrix(m_e, p, ts.substream(0));
      Generator gen(ts.substream(1));
      const Support x = sample_support(p, k, gen);
      std::vector<double> z(m_e, 0.0);
      for (std::size_t j : x.indices()) {
        const double w = gen.normal();
        for (std::size_t i = 0; i < m_e; ++i) z[i] += a(i, j) * w;
      }
      const auto est = hxz_shadow(a, x, z, kappa, rho_e);
      return Pair{est.max_sigma_dev, est.max_colnorm_dev};
    });
    std::vector<double> sig(devs.size()), col(devs.size());
    for (std::size_t t = 0; t < devs.size(); ++t) {
      sig[t] = devs[t].sigma;
      col[t] = devs[t].colnorm;
    }
    out.push_back({p, m_e, k, TrialReport::from_samples(sig, rng.seed),
                   TrialReport::from_samples(col, rng.seed)});
  }
  return out;
}

}  // namespace mgwt
