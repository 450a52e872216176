#pragma once

/// @file
/// Closed-form asymptotic bounds for Gaussian channel matrices with
/// m_b / p -> rho_b and m_e / p -> rho_e.

#include <cmath>

#include "mgwt/bounds_finite.hpp"
#include "mgwt/errors.hpp"
#include "mgwt/specfun.hpp"

namespace mgwt {

struct AsymptoticRatios {
  double rho_b = 0.0;
  double rho_e = 0.0;

  /// Enforces 0 < rho_b <= 1/2 and 0 <= rho_e <= rho_b.
  static AsymptoticRatios make(double rho_b, double rho_e) {
    detail::require(rho_b > 0.0 && rho_b <= 0.5, "AsymptoticRatios: need 0 < rho_b <= 1/2");
    detail::require(rho_e >= 0.0 && rho_e <= rho_b, "AsymptoticRatios: need 0 <= rho_e <= rho_b");
    return {rho_b, rho_e};
  }
};

/// Almost-sure lower bound on the asymptotic secrecy capacity:
///   H2(rho_b) - 1/2 [(1 - rho_e) log2(1 / (1 - rho_e))
///                    - (rho_b - rho_e) log2(rho_b / (rho_b - rho_e))].
inline BoundValue lb3(const AsymptoticRatios& ratios) {
  const auto r = AsymptoticRatios::make(ratios.rho_b, ratios.rho_e);
  if (!(r.rho_e < r.rho_b)) throw DomainError("lb3: need rho_e < rho_b");
  BoundValue out;
  out.kind = BoundKind::LB3;
  out.bits_per_dim = binary_entropy(r.rho_b);
  if (r.rho_e == 0.0) return out;
  const double gap = r.rho_b - r.rho_e;
  const double eve = -(1.0 - r.rho_e) * std::log1p(-r.rho_e);
  const double shared = gap * std::log(r.rho_b / gap);
  out.bits_per_dim -= 0.5 * (eve - shared) * kLog2E;
  return out;
}

/// Left limit of lb3 as rho_e -> rho_b: H2(rho_b) - 1/2 (1 - rho_b) log2(1 / (1 - rho_b)).
/// The (rho_b - rho_e) log term vanishes in the limit.
inline BoundValue lb3_left_limit(double rho_b) {
  const auto r = AsymptoticRatios::make(rho_b, rho_b);
  BoundValue out;
  out.kind = BoundKind::LB3;
  out.bits_per_dim = binary_entropy(r.rho_b) + 0.5 * (1.0 - r.rho_b) * std::log1p(-r.rho_b) * kLog2E;
  out.meta["left_limit"] = "true";
  return out;
}

/// Asymptotic capacity of Bob's channel: H2(rho_b).
inline BoundValue ub2(const AsymptoticRatios& ratios) {
  const auto r = AsymptoticRatios::make(ratios.rho_b, ratios.rho_e);
  BoundValue out;
  out.kind = BoundKind::UB2;
  out.bits_per_dim = binary_entropy(r.rho_b);
  return out;
}

/// Upper bound under symmetric input distributions: g(rho_b, rho_e).
/// At rho_e = 0 returns the UB2 value flagged meta["degenerate"] = "true".
inline BoundValue ub3(const AsymptoticRatios& ratios, const QuadratureSpec& quad = {}) {
  const auto r = AsymptoticRatios::make(ratios.rho_b, ratios.rho_e);
  BoundValue out;
  out.kind = BoundKind::UB3;
  if (r.rho_e == 0.0) {
    out.bits_per_dim = ub2(r).bits_per_dim;
    out.meta["degenerate"] = "true";
    return out;
  }
  out.bits_per_dim = mixture_entropy_g(r.rho_b, r.rho_e, quad);
  return out;
}

/// Both branches of the final maximum in the symmetric-input upper bound.
struct Ub3BranchCheck {
  double g_value = 0.0;
  double linear_branch = 0.0;    ///< rho_b * log2(e), the large-support branch
  double rho_b_branch = 0.0;     ///< rho_b alone, as the bound is sometimes displayed
  bool g_attains_max = false;    ///< g >= rho_b * log2(e)
  bool g_exceeds_rho_b = false;  ///< g >= rho_b
};

inline Ub3BranchCheck ub3_branch_check(const AsymptoticRatios& ratios, const QuadratureSpec& quad = {}) {
  const auto r = AsymptoticRatios::make(ratios.rho_b, ratios.rho_e);
  if (r.rho_e == 0.0) throw DomainError("ub3_branch_check: need rho_e > 0");
  Ub3BranchCheck out;
  out.g_value = mixture_entropy_g(r.rho_b, r.rho_e, quad);
  out.linear_branch = r.rho_b * kLog2E;
  out.rho_b_branch = r.rho_b;
  out.g_attains_max = out.g_value >= out.linear_branch;
  out.g_exceeds_rho_b = out.g_value >= out.rho_b_branch;
  return out;
}

}  // namespace mgwt
