#pragma once

/// @file
/// The multiplicative Gaussian wiretap channel: Y = A_b W X, Z = A_e W X with
/// binary X and diagonal W of i.i.d. standard normals, together with the
/// rank-based message encoder and the exhaustive subspace-membership decoder.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgwt/bounds_finite.hpp"
#include "mgwt/errors.hpp"
#include "mgwt/matrix.hpp"
#include "mgwt/random.hpp"
#include "mgwt/stats.hpp"
#include "mgwt/support.hpp"

namespace mgwt {

class ChannelInstance {
 public:
  ChannelInstance(ChannelDims dims, Matrix a_b, Matrix a_e)
      : dims_(ChannelDims::make(dims.p, dims.m_b, dims.m_e)), a_b_(std::move(a_b)), a_e_(std::move(a_e)) {
    if (a_b_.rows() != dims_.m_b || a_b_.cols() != dims_.p) {
      throw DimensionMismatch("ChannelInstance: A_b must be m_b x p");
    }
    if (a_e_.rows() != dims_.m_e || a_e_.cols() != dims_.p) {
      throw DimensionMismatch("ChannelInstance: A_e must be m_e x p");
    }
  }

  /// Gaussian A_b from rng.substream(0) and A_e from rng.substream(1).
  static ChannelInstance gaussian(ChannelDims dims, SeededStream rng) {
    Matrix a_e = dims.m_e == 0 ? Matrix(0, dims.p) : sample_gaussian_matrix(dims.m_e, dims.p, rng.substream(1));
    return {dims, sample_gaussian_matrix(dims.m_b, dims.p, rng.substream(0)), std::move(a_e)};
  }

  /// A_b and A_e are the first m_b and m_e rows of the p x p identity.
  static ChannelInstance identity_rows(ChannelDims dims) {
    return {dims, Matrix::identity_rows(dims.m_b, dims.p), Matrix::identity_rows(dims.m_e, dims.p)};
  }

  [[nodiscard]] const ChannelDims& dims() const { return dims_; }
  [[nodiscard]] const Matrix& a_b() const { return a_b_; }
  [[nodiscard]] const Matrix& a_e() const { return a_e_; }

 private:
  ChannelDims dims_;
  Matrix a_b_;
  Matrix a_e_;
};

struct TransmitResult {
  Support x;
  std::vector<double> w_diag;
  std::vector<double> y;
  std::vector<double> z;
};

/// Number of messages: C(p, m_b - 1).
inline std::uint64_t message_count(const ChannelDims& dims) {
  const auto c = binomial_u64(dims.p, dims.m_b - 1);
  if (!c) throw RangeError("message_count: C(p, m_b - 1) does not fit in 64 bits");
  return *c;
}

/// Message s maps to the s-th weight-(m_b - 1) support.
inline Support encode_message(std::uint64_t s, const ChannelDims& dims) {
  const auto d = ChannelDims::relaxed(dims.p, dims.m_b, dims.m_e);
  if (s >= message_count(d)) throw RangeError("encode_message: s >= C(p, m_b - 1)");
  return support_unrank(s, d.p, d.m_b - 1);
}

inline std::uint64_t decode_message(const Support& x) { return support_rank(x); }

/// A diag(w) x: the sum of w_j A(j) over j in x, accumulated in index order.
inline std::vector<double> channel_output(const Matrix& a, std::span<const double> w_diag, const Support& x) {
  if (x.ambient() != a.cols() || w_diag.size() != a.cols()) {
    throw DimensionMismatch("channel_output: sizes do not match matrix columns");
  }
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t j : x.indices()) {
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] += a(i, j) * w_diag[j];
  }
  return out;
}

/// One channel use: draws w_diag (length p) from `rng` and computes Bob's and
/// Eve's observations.
inline TransmitResult transmit(const ChannelInstance& inst, const Support& x, SeededStream rng) {
  if (x.ambient() != inst.dims().p) throw DimensionMismatch("transmit: support ambient != p");
  Generator gen(rng);
  TransmitResult out;
  out.x = x;
  out.w_diag.resize(inst.dims().p);
  for (double& w : out.w_diag) w = gen.normal();
  out.y = channel_output(inst.a_b(), out.w_diag, x);
  out.z = channel_output(inst.a_e(), out.w_diag, x);
  return out;
}

/// How the decoder reacts to candidates.
enum class DecodeMode {
  enumerate,  ///< scan every support; AmbiguousDecode reports the full candidate count
  fail,       ///< stop at the second passing support and raise AmbiguousDecode
};

/// Default relative-residual threshold. An impostor support's residual has a
/// bounded density at zero, so the false-candidate rate scales roughly
/// linearly with the tolerance; 1e-6 still admits about 1e-3 ambiguous
/// decodes per trial at p = 12, m_b = 4.
inline constexpr double kDefaultDecodeTolerance = 1e-10;

namespace detail {

// ||y - P y|| where P projects onto span(A(x)); columns are orthonormalized by
// modified Gram-Schmidt with one reorthogonalization pass, and columns that
// fall into the span of earlier ones are dropped.
inline double projection_residual(const Matrix& a, const Support& x, std::span<const double> y) {
  const std::size_t m = a.rows();
  std::vector<std::vector<double>> basis;
  basis.reserve(x.weight());
  for (std::size_t j : x.indices()) {
    std::vector<double> v(m);
    double norm0 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(i, j);
      norm0 += v[i] * v[i];
    }
    norm0 = std::sqrt(norm0);
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += q[i] * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= dot * q[i];
      }
    }
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * norm0) continue;
    for (double& e : v) e /= norm;
    basis.push_back(std::move(v));
  }
  std::vector<double> r(y.begin(), y.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += q[i] * r[i];
      for (std::size_t i = 0; i < m; ++i) r[i] -= dot * q[i];
    }
  }
  double s = 0.0;
  for (double e : r) s += e * e;
  return std::sqrt(s);
}

}  // namespace detail

/// Relative residual ||y - P_{A(x)} y|| / ||y|| of y against span(A(x)).
inline double relative_residual(const Matrix& a, const Support& x, std::span<const double> y) {
  if (x.ambient() != a.cols()) throw DimensionMismatch("relative_residual: support ambient != cols");
  if (y.size() != a.rows()) throw DimensionMismatch("relative_residual: y length != rows");
  double ny = 0.0;
  for (double e : y) ny += e * e;
  ny = std::sqrt(ny);
  if (ny == 0.0) return std::numeric_limits<double>::infinity();
  return detail::projection_residual(a, x, y) / ny;
}

/// The unique weight-k support whose column span contains y up to relative
/// residual `tol`. y = 0 has no candidate by convention.
inline Support decode_support(const Matrix& a_b, std::span<const double> y, std::size_t k,
                              double tol = kDefaultDecodeTolerance, DecodeMode mode = DecodeMode::enumerate) {
  if (y.size() != a_b.rows()) throw DimensionMismatch("decode_support: y length != rows");
  detail::require(tol > 0.0, "decode_support: tol must be positive");
  detail::require(k <= a_b.cols(), "decode_support: need k <= p");
  const auto supports = enumerate_supports(a_b.cols(), k);

  double ny = 0.0;
  for (double e : y) ny += e * e;
  if (ny == 0.0) throw NoCandidate("decode_support: y = 0 lies in every span; no candidate by convention");
  ny = std::sqrt(ny);

  std::optional<Support> found;
  std::size_t candidates = 0;
  for (const Support& x : supports) {
    if (detail::projection_residual(a_b, x, y) / ny > tol) continue;
    ++candidates;
    if (!found) {
      found = x;
    } else if (mode == DecodeMode::fail) {
      throw AmbiguousDecode("decode_support: at least two supports within tolerance");
    }
  }
  if (candidates == 0) throw NoCandidate("decode_support: no support within tolerance");
  if (candidates > 1) {
    throw AmbiguousDecode("decode_support: " + std::to_string(candidates) + " supports within tolerance");
  }
  return *found;
}

struct DecodeReport {
  TrialReport errors;  ///< per-trial 0/1 error indicator; mean is the error rate
  std::size_t wrong = 0;
  std::size_t no_candidate = 0;
  std::size_t ambiguous = 0;
};

/// End-to-end harness: uniform message, encode, transmit, decode. Trial t
/// draws its message and noise from rng.substream(t).
inline DecodeReport decoding_error_rate(const ChannelInstance& inst, std::size_t trials, SeededStream rng,
                                        double tol = kDefaultDecodeTolerance) {
  detail::require(trials >= 1, "decoding_error_rate: need trials >= 1");
  const auto& d = inst.dims();
  const std::uint64_t messages = message_count(d);
  (void)enumerate_supports(d.p, d.m_b - 1);  // guard check before any work
  enum Outcome : int { kOk = 0, kWrong = 1, kNone = 2, kAmbiguous = 3 };
  const auto outcomes = parallel_map(trials, [&](std::size_t t) {
    const SeededStream ts = rng.substream(t);
    Generator gen(ts.substream(0));
    const std::uint64_t s = gen.below(messages);
    const auto tx = transmit(inst, encode_message(s, d), ts.substream(1));
    try {
      const Support xhat = decode_support(inst.a_b(), tx.y, d.m_b - 1, tol);
      return decode_message(xhat) == s ? kOk : kWrong;
    } catch (const NoCandidate&) {
      return kNone;
    } catch (const AmbiguousDecode&) {
      return kAmbiguous;
    }
  });
  DecodeReport rep;
  std::vector<double> err(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    err[t] = outcomes[t] == kOk ? 0.0 : 1.0;
    rep.wrong += outcomes[t] == kWrong;
    rep.no_candidate += outcomes[t] == kNone;
    rep.ambiguous += outcomes[t] == kAmbiguous;
  }
  rep.errors = TrialReport::from_samples(err, rng.seed);
  return rep;
}

}  // namespace mgwt
