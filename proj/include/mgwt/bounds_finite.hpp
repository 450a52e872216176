#pragma once

/// @file
/// Finite-dimension secrecy and capacity bounds for the multiplicative
/// Gaussian wiretap channel Y = A_b W X, Z = A_e W X.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mgwt/errors.hpp"
#include "mgwt/matrix.hpp"
#include "mgwt/random.hpp"
#include "mgwt/specfun.hpp"
#include "mgwt/stats.hpp"
#include "mgwt/support.hpp"

namespace mgwt {

/// Problem sizes (p, m_b, m_e).
struct ChannelDims {
  std::size_t p = 0;
  std::size_t m_b = 0;
  std::size_t m_e = 0;

  /// Standing assumption 0 <= m_e < m_b < p / 2.
  static ChannelDims make(std::size_t p, std::size_t m_b, std::size_t m_e) {
    auto d = relaxed(p, m_b, m_e);
    detail::require(m_e < m_b, "ChannelDims: need m_e < m_b");
    return d;
  }

  /// Only enforces 1 <= m_b < p / 2; any m_e is accepted.
  static ChannelDims relaxed(std::size_t p, std::size_t m_b, std::size_t m_e) {
    detail::require(m_b >= 1, "ChannelDims: need m_b >= 1");
    detail::require(2 * m_b < p, "ChannelDims: need m_b < p / 2");
    return {p, m_b, m_e};
  }

  friend bool operator==(const ChannelDims&, const ChannelDims&) = default;
};

enum class BoundKind { LB1_EXACT, LB1_SAMPLED, LB2_EXPECTED, UB1, IDENTITY_CS, LB3, UB2, UB3 };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::LB1_EXACT: return "LB1_EXACT";
    case BoundKind::LB1_SAMPLED: return "LB1_SAMPLED";
    case BoundKind::LB2_EXPECTED: return "LB2_EXPECTED";
    case BoundKind::UB1: return "UB1";
    case BoundKind::IDENTITY_CS: return "IDENTITY_CS";
    case BoundKind::LB3: return "LB3";
    case BoundKind::UB2: return "UB2";
    case BoundKind::UB3: return "UB3";
  }
  return "?";
}

/// A bound evaluation in bits per dimension. `std_error` is set exactly for
/// sampled estimators; `meta` records seeds, sample counts and flags.
struct BoundValue {
  double bits_per_dim = 0.0;
  BoundKind kind = BoundKind::LB1_EXACT;
  std::optional<double> std_error;
  std::map<std::string, std::string> meta;
};

/// Support-space strategy for minima and averages over X_k^p.
struct Enumerate {};
struct Sample {
  std::size_t n = 0;
  SeededStream rng;
};
using SupportMode = std::variant<Enumerate, Sample>;

namespace detail {

inline void check_shape(const Matrix& a, std::size_t rows, std::size_t cols, const char* what) {
  if (a.rows() != rows || a.cols() != cols) {
    throw DimensionMismatch(std::string(what) + ": matrix shape does not match dims");
  }
}

inline void put_stream(BoundValue& b, SeededStream s) {
  b.meta["seed"] = std::to_string(s.seed);
  b.meta["stream_index"] = std::to_string(s.stream_index);
}

}  // namespace detail

/// Exact lower bound on C_s for a fixed eavesdropper matrix (A_b is assumed
/// fully linearly independent; it does not enter the value):
///   (1/p) log2 C(p, m_b-1) - (1/2p) log2 det(A_e A_e^T / p)
///   + mean over x in X^p_{m_b-1} of (1/2p) log2 det(A_e(x) A_e(x)^T / (m_b-1)).
inline BoundValue lb1_exact(const Matrix& a_e, const ChannelDims& dims) {
  const auto d = ChannelDims::make(dims.p, dims.m_b, dims.m_e);
  detail::check_shape(a_e, d.m_e, d.p, "lb1_exact");
  const double p = static_cast<double>(d.p);
  const std::size_t k = d.m_b - 1;

  BoundValue out;
  out.kind = BoundKind::LB1_EXACT;
  out.bits_per_dim = log_binomial(static_cast<std::int64_t>(d.p), static_cast<std::int64_t>(k)) / p;
  if (d.m_e == 0) return out;

  const auto supports = enumerate_supports(d.p, k);
  const double full = gram_logdet(a_e, Support::full(d.p), p);
  CompensatedSum sum;
  for (const Support& x : supports) sum.add(gram_logdet(a_e, x, static_cast<double>(k)));
  const double avg = sum.value() / static_cast<double>(supports.size());
  out.bits_per_dim += (avg - full) / (2.0 * p);
  out.meta["supports"] = std::to_string(supports.size());
  return out;
}

/// lb1_exact with the support average replaced by a mean over `n_samples`
/// uniformly drawn supports.
inline BoundValue lb1_sampled(const Matrix& a_e, const ChannelDims& dims, std::size_t n_samples,
                              SeededStream rng) {
  const auto d = ChannelDims::make(dims.p, dims.m_b, dims.m_e);
  detail::check_shape(a_e, d.m_e, d.p, "lb1_sampled");
  detail::require(n_samples >= 1, "lb1_sampled: n_samples must be positive");
  const double p = static_cast<double>(d.p);
  const std::size_t k = d.m_b - 1;

  BoundValue out;
  out.kind = BoundKind::LB1_SAMPLED;
  out.std_error = 0.0;
  out.meta["n_samples"] = std::to_string(n_samples);
  detail::put_stream(out, rng);
  out.bits_per_dim = log_binomial(static_cast<std::int64_t>(d.p), static_cast<std::int64_t>(k)) / p;
  if (d.m_e == 0) return out;

  Generator gen(rng);
  std::vector<double> terms(n_samples);
  for (double& t : terms) t = gram_logdet(a_e, sample_support(d.p, k, gen), static_cast<double>(k));
  const auto rep = TrialReport::from_samples(terms, rng.seed);
  const double full = gram_logdet(a_e, Support::full(d.p), p);
  out.bits_per_dim += (rep.mean - full) / (2.0 * p);
  out.std_error = rep.std_error / (2.0 * p);
  return out;
}

/// Lower bound on E[C_s] over Gaussian A_e, closed form via digamma:
///   (1/p) log2 C(p, m_b-1) - (m_e/2p) log2((m_b-1)/p)
///   - (log2 e / 2p) sum_{i=1}^{m_e} [psi((p-i+1)/2) - psi((m_b-i)/2)].
inline BoundValue lb2_expected(const ChannelDims& dims) {
  const auto d = ChannelDims::make(dims.p, dims.m_b, dims.m_e);
  const double p = static_cast<double>(d.p);
  const double mb = static_cast<double>(d.m_b);
  BoundValue out;
  out.kind = BoundKind::LB2_EXPECTED;
  out.bits_per_dim =
      log_binomial(static_cast<std::int64_t>(d.p), static_cast<std::int64_t>(d.m_b - 1)) / p;
  if (d.m_e == 0) return out;
  CompensatedSum s;
  for (std::size_t i = 1; i <= d.m_e; ++i) {
    const double di = static_cast<double>(i);
    s.add(digamma((p - di + 1.0) / 2.0) - digamma((mb - di) / 2.0));
  }
  out.bits_per_dim -= static_cast<double>(d.m_e) / (2.0 * p) * std::log2((mb - 1.0) / p);
  out.bits_per_dim -= kLog2E / (2.0 * p) * s.value();
  return out;
}

namespace detail {

struct SupportMin {
  double value = std::numeric_limits<double>::infinity();
  bool singular = false;
  bool sampled = false;
  std::uint64_t evaluated = 0;
};

// min over weight-k supports of gram_logdet(a, x, k). A singular Gram makes
// the minimum -infinity and sets `singular`. Sample mode draws support i from
// rng.substream(i), so the result does not depend on the worker count; when
// n >= C(p, k) every support is visited instead.
inline SupportMin min_gram_logdet(const Matrix& a, std::size_t k, const SupportMode& mode) {
  SupportMin out;
  const auto eval = [&](const Support& x) {
    try {
      return gram_logdet(a, x, static_cast<double>(k));
    } catch (const SingularGram&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const auto total = binomial_u64(a.cols(), k);
  const auto* sample = std::get_if<Sample>(&mode);
  if (sample == nullptr || (total && sample->n >= *total)) {
    for (const Support& x : enumerate_supports(a.cols(), k)) {
      out.value = std::min(out.value, eval(x));
      ++out.evaluated;
    }
  } else {
    out.sampled = true;
    const auto values = parallel_map(sample->n, [&](std::size_t i) {
      Generator gen(sample->rng.substream(i));
      return eval(sample_support(a.cols(), k, gen));
    });
    for (double v : values) out.value = std::min(out.value, v);
    out.evaluated = sample->n;
  }
  out.singular = std::isinf(out.value) && out.value < 0.0;
  return out;
}

}  // namespace detail

/// Upper bound on Bob's capacity C_b:
///   (1/p) max(log2 C(p, m_b-1), max_{m_b <= k <= p} c(k)) + log2(p) / p,
///   c(k) = max_i (m_b/2) log2(||A_b(i)||^2 / m_b) - min_x (1/2) log2 det(A_b(x) A_b(x)^T / k).
///
/// The support term is a minimum: it lower-bounds h(Y | X), and only the
/// minimum gives a valid upper bound. A k whose minimization meets a singular
/// Gram has c(k) = +inf; it is excluded and listed under meta["singular_k"].
/// In Sample mode each k with C(p, k) > n uses n random supports drawn from
/// rng.substream(k) and the result is flagged meta["optimistic"] = "true";
/// when n >= C(p, k) that k is enumerated exhaustively.
inline BoundValue ub1(const Matrix& a_b, const ChannelDims& dims, const SupportMode& mode = Enumerate{}) {
  const auto d = ChannelDims::relaxed(dims.p, dims.m_b, dims.m_e);
  detail::check_shape(a_b, d.m_b, d.p, "ub1");
  const double p = static_cast<double>(d.p);
  const double mb = static_cast<double>(d.m_b);

  BoundValue out;
  out.kind = BoundKind::UB1;
  const auto* sample = std::get_if<Sample>(&mode);
  if (const auto* s = sample) {
    detail::require(s->n >= 1, "ub1: sample count must be positive");
    detail::put_stream(out, s->rng);
    out.meta["n_samples"] = std::to_string(s->n);
  }

  const auto norms = column_norms_sq(a_b);
  double column_term = -std::numeric_limits<double>::infinity();
  for (double n : norms) column_term = std::max(column_term, mb / 2.0 * std::log2(n / mb));

  const double binom_term =
      log_binomial(static_cast<std::int64_t>(d.p), static_cast<std::int64_t>(d.m_b - 1));
  double best = binom_term;
  std::size_t best_k = 0;
  std::string singular;
  bool optimistic = false;
  for (std::size_t k = d.m_b; k <= d.p; ++k) {
    const SupportMode mode_k =
        sample ? SupportMode{Sample{sample->n, sample->rng.substream(k)}} : SupportMode{Enumerate{}};
    const auto m = detail::min_gram_logdet(a_b, k, mode_k);
    optimistic = optimistic || m.sampled;
    if (m.singular) {
      singular += (singular.empty() ? "" : ",") + std::to_string(k);
      continue;
    }
    const double c = column_term - 0.5 * m.value;
    if (c > best) {
      best = c;
      best_k = k;
    }
  }
  out.bits_per_dim = best / p + std::log2(p) / p;
  out.meta["argmax_k"] = std::to_string(best_k);
  if (!singular.empty()) {
    out.meta["singular_k"] = singular;
    out.meta["warning"] = "singular Gram: c(k) = +inf excluded";
  }
  if (optimistic) out.meta["optimistic"] = "true";
  return out;
}

/// Secrecy capacity when A_b and A_e are the first m_b and m_e rows of the
/// identity: (m_b - m_e) / p, or 0 when m_e >= m_b.
inline BoundValue identity_secrecy(const ChannelDims& dims) {
  const auto d = ChannelDims::relaxed(dims.p, dims.m_b, dims.m_e);
  BoundValue out;
  out.kind = BoundKind::IDENTITY_CS;
  out.bits_per_dim =
      d.m_e < d.m_b ? static_cast<double>(d.m_b - d.m_e) / static_cast<double>(d.p) : 0.0;
  return out;
}

}  // namespace mgwt
