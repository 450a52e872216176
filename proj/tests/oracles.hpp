#pragma once

// Independent reference computations used only by the test suites. Nothing
// here calls into the library paths it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<long double>>;

/// Determinant by Laplace (cofactor) expansion along the first row.
inline long double cofactor_det(const Dense& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0L;
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  long double det = 0.0L;
  for (std::size_t c = 0; c < n; ++c) {
    Dense minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long double> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[r][j]);
      minor.push_back(row);
    }
    det += ((c % 2) ? -1.0L : 1.0L) * a[0][c] * cofactor_det(minor);
  }
  return det;
}

/// A(cols) A(cols)^T for a row-major rows x p array.
inline Dense gram(const std::vector<double>& a, std::size_t rows, std::size_t p, const std::vector<std::size_t>& cols) {
  Dense g(rows, std::vector<long double>(rows, 0.0L));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t c : cols) g[i][j] += static_cast<long double>(a[i * p + c]) * a[j * p + c];
  return g;
}

/// All k-subsets of [0, p) in lexicographic order, by recursion.
inline void subsets(std::size_t p, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < p; ++i) {
    cur.push_back(i);
    subsets(p, k, i + 1, cur, out);
    cur.pop_back();
  }
}
inline std::vector<std::vector<std::size_t>> subsets(std::size_t p, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(p, k, 0, cur, out);
  return out;
}

/// Exact C(n, k) in 128-bit arithmetic (valid while the result fits).
inline unsigned __int128 binomial128(unsigned n, unsigned k) {
  unsigned __int128 r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// psi(x) = -gamma + sum_{n >= 0} [1/(n+1) - 1/(n+x)], summed to N terms
/// with an integral tail correction.
inline long double digamma_series(long double x) {
  constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
  constexpr std::size_t kTerms = 2'000'000;
  long double s = 0.0L;
  for (std::size_t n = kTerms; n-- > 0;) {
    const long double nn = static_cast<long double>(n);
    s += 1.0L / (nn + 1.0L) - 1.0L / (nn + x);
  }
  const long double N = static_cast<long double>(kTerms);
  // sum_{n >= N} f(n), f(n) = 1/(n+1) - 1/(n+x): integral plus half endpoint.
  const long double tail = std::log((N + x) / (N + 1.0L)) + 0.5L * (1.0L / (N + 1.0L) - 1.0L / (N + x));
  return -kEulerGamma + s + tail;
}

/// Monte Carlo h(S) in bits for S = W X + sigma V, X ~ Bernoulli(kappa),
/// plug-in estimate of E[-log2 f(S)] with the closed-form mixture density.
struct EntropyEstimate {
  double g_bits;
  double std_error;
};

inline EntropyEstimate mixture_g_monte_carlo(double kappa, double rho_e, std::size_t samples, std::uint64_t seed) {
  const double pi = std::numbers::pi;
  const double s0 = kappa / rho_e;
  const double s1 = 1.0 + s0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution bern(kappa);
  long double sum = 0.0L, sumsq = 0.0L;
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = (bern(rng) ? normal(rng) : 0.0) + std::sqrt(s0) * normal(rng);
    const double f = (1.0 - kappa) * std::exp(-0.5 * s * s / s0) / std::sqrt(2.0 * pi * s0) +
                     kappa * std::exp(-0.5 * s * s / s1) / std::sqrt(2.0 * pi * s1);
    const double v = -std::log2(f);
    sum += v;
    sumsq += static_cast<long double>(v) * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = static_cast<double>(sum / n);
  const double var = static_cast<double>((sumsq - sum * sum / n) / (n - 1.0));
  const double h_s_given_x = (1.0 - kappa) * 0.5 * std::log2(2.0 * pi * std::numbers::e * s0) +
                             kappa * 0.5 * std::log2(2.0 * pi * std::numbers::e * s1);
  const double h2 = -kappa * std::log2(kappa) - (1.0 - kappa) * std::log2(1.0 - kappa);
  return {h2 - (mean - h_s_given_x), std::sqrt(var / n)};
}

}  // namespace oracle
