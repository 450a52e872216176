#pragma once

/// @file
/// Scalar special functions used by every bound: log-gamma, digamma,
/// log-binomials, binary entropy, the Wishart limit function mu(rho) and the
/// conditional entropy g(kappa, rho_e) of a Bernoulli input observed through
/// a two-component zero-mean Gaussian mixture.
///
/// Internal arithmetic is carried out in nats. Every function whose name does
/// not say otherwise returns bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mgwt/errors.hpp"

namespace mgwt {

inline constexpr double kLog2E = std::numbers::log2e;
inline constexpr double kLn2 = std::numbers::ln2;

/// Natural log of the gamma function for x > 0.
///
/// std::lgamma is avoided because it writes the global signgam, which makes it
/// unsafe to call from the parallel Monte Carlo workers.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  // Small positive integers: exact log-factorials.
  if (x <= 30.0 && x == std::floor(x)) {
    double acc = 0.0;
    for (int i = 2; i < static_cast<int>(x); ++i) acc += std::log(static_cast<double>(i));
    return acc;
  }
  if (x < 0.5) {
    return log_gamma(x + 1.0) - std::log(x);
  }
  // Lanczos approximation, g = 7, n = 9.
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) a += kCoef[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

/// Digamma psi(x) = Gamma'(x) / Gamma(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma: argument must be positive and finite");
  }
  double shift = 0.0;
  while (x < 6.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number tail: sum_k B_2k / (2k x^2k), k = 1..7.
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))))));
  return shift + std::log(x) - 0.5 * inv - tail;
}

/// log2 C(p, k) via log-gamma; safe for p up to ~1e6 and beyond.
inline double log_binomial(std::int64_t p, std::int64_t k) {
  if (p < 0 || k < 0 || k > p) throw DomainError("log_binomial: need 0 <= k <= p");
  if (k == 0 || k == p) return 0.0;
  const double pd = static_cast<double>(p);
  const double kd = static_cast<double>(k);
  return (log_gamma(pd + 1.0) - log_gamma(kd + 1.0) - log_gamma(pd - kd + 1.0)) * kLog2E;
}

namespace detail {

// H2 in nats, evaluated on (min(q, 1-q), 1 - min) so H(q) and H(1-q) are
// computed from the same operands.
inline double binary_entropy_nats(double q) {
  const double lo = q <= 0.5 ? q : 1.0 - q;
  if (lo <= 0.0) return 0.0;
  const double hi = 1.0 - lo;
  return -lo * std::log(lo) - hi * std::log1p(-lo);
}

}  // namespace detail

/// Binary entropy H2(q) in bits with H2(0) = H2(1) = 0.
inline double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("binary_entropy: q must lie in [0, 1]");
  return detail::binary_entropy_nats(q) * kLog2E;
}

/// Limit of (1/n) log2 det(W / n) for an m x m Wishart matrix with n degrees
/// of freedom and m / n -> rho.
inline double mu(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("mu: rho must lie in (0, 1]");
  if (rho == 1.0) return -kLog2E;
  return (-(1.0 - rho) * std::log1p(-rho) - rho) * kLog2E;
}

/// Integration controls for the mixture entropy.
struct QuadratureSpec {
  double half_width_sigmas = 10.0;  ///< truncation in units of the wider component's sigma
  double abs_tolerance = 1e-9;      ///< absolute error target, nats
  std::size_t max_subdivisions = std::size_t{1} << 16;

  void validate() const {
    detail::require(half_width_sigmas >= 6.0, "QuadratureSpec: half_width_sigmas must be >= 6");
    detail::require(abs_tolerance > 0.0, "QuadratureSpec: abs_tolerance must be positive");
    detail::require(max_subdivisions >= 16, "QuadratureSpec: max_subdivisions must be >= 16");
  }
};

namespace detail {

struct SimpsonResult {
  double value;
  std::size_t subdivisions;
};

/// Adaptive Simpson on [a, b]. Throws QuadratureError once more than
/// `max_subdivisions` intervals have been split without meeting `tol`.
template <class F>
SimpsonResult adaptive_simpson(const F& f, double a, double b, double tol,
                               std::size_t max_subdivisions) {
  struct Interval {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  constexpr int kMinDepth = 4;
  constexpr int kMaxDepth = 60;

  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  std::vector<Interval> stack;
  stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 0});

  double total = 0.0;
  double comp = 0.0;  // Neumaier compensation
  std::size_t splits = 0;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (iv.a + iv.b);
    const double lm = 0.5 * (iv.a + mid);
    const double rm = 0.5 * (mid + iv.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - iv.a) / 6.0 * (iv.fa + 4.0 * flm + iv.fm);
    const double right = (iv.b - mid) / 6.0 * (iv.fm + 4.0 * frm + iv.fb);
    const double delta = left + right - iv.whole;
    if (iv.depth >= kMinDepth && (std::abs(delta) <= 15.0 * iv.tol || iv.depth >= kMaxDepth)) {
      if (iv.depth >= kMaxDepth && std::abs(delta) > 15.0 * iv.tol) {
        throw QuadratureError("adaptive_simpson: maximum recursion depth reached");
      }
      const double piece = left + right + delta / 15.0;
      const double t = total + piece;
      comp += std::abs(total) >= std::abs(piece) ? (total - t) + piece : (piece - t) + total;
      total = t;
      continue;
    }
    if (++splits > max_subdivisions) {
      throw QuadratureError("adaptive_simpson: tolerance not met within max_subdivisions");
    }
    stack.push_back({mid, iv.b, iv.fm, frm, iv.fb, right, 0.5 * iv.tol, iv.depth + 1});
    stack.push_back({iv.a, mid, iv.fa, flm, iv.fm, left, 0.5 * iv.tol, iv.depth + 1});
  }
  return {total + comp, splits};
}

inline double gaussian_entropy_nats(double variance) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

}  // namespace detail

/// g(kappa, rho_e) = H(X | W X + sqrt(kappa / rho_e) V) in bits, where
/// X ~ Bernoulli(kappa) and W, V are independent standard normals.
///
/// Evaluated as H2(kappa) - [h(S) - h(S|X)]. h(S|X) is closed form; h(S) is
/// the adaptive-Simpson integral of -f ln f over [0, U] doubled by symmetry,
/// with U = half_width_sigmas * sqrt(1 + sigma^2). At rho_e = 0 the analytic
/// limit H2(kappa) is returned.
inline double mixture_entropy_g(double kappa, double rho_e, const QuadratureSpec& quad = {}) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw DomainError("mixture_entropy_g: kappa must lie in [0, 1]");
  }
  if (!(rho_e >= 0.0 && rho_e <= 1.0)) {
    throw DomainError("mixture_entropy_g: rho_e must lie in [0, 1]");
  }
  quad.validate();
  if (kappa == 0.0 || kappa == 1.0) return 0.0;
  if (rho_e == 0.0) return binary_entropy(kappa);

  const double s0 = kappa / rho_e;  // variance of S | X = 0
  const double s1 = 1.0 + s0;       // variance of S | X = 1
  const double c0 = (1.0 - kappa) / std::sqrt(2.0 * std::numbers::pi * s0);
  const double c1 = kappa / std::sqrt(2.0 * std::numbers::pi * s1);
  const auto neg_f_log_f = [=](double s) {
    const double f = c0 * std::exp(-0.5 * s * s / s0) + c1 * std::exp(-0.5 * s * s / s1);
    return f > 0.0 ? -f * std::log(f) : 0.0;
  };
  const double upper = quad.half_width_sigmas * std::sqrt(s1);
  const auto res = detail::adaptive_simpson(neg_f_log_f, 0.0, upper, 0.5 * quad.abs_tolerance,
                                            quad.max_subdivisions);
  const double h_s = 2.0 * res.value;
  const double h_s_given_x = (1.0 - kappa) * detail::gaussian_entropy_nats(s0) +
                             kappa * detail::gaussian_entropy_nats(s1);
  const double g = (detail::binary_entropy_nats(kappa) - (h_s - h_s_given_x)) * kLog2E;
  return std::max(g, 0.0);
}

}  // namespace mgwt
