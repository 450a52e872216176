#pragma once

/// @file
/// Monte Carlo plumbing: compensated summation, trial summaries and a
/// deterministic parallel trial runner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mgwt/errors.hpp"

namespace mgwt {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

/// Summary of a Monte Carlo run.
struct TrialReport {
  std::size_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;  ///< sample stdev / sqrt(trials)
  double min = 0.0;
  double max = 0.0;
  std::uint64_t seed = 0;

  /// Reduces per-trial values in index order.
  static TrialReport from_samples(std::span<const double> values, std::uint64_t seed) {
    if (values.empty()) throw DomainError("TrialReport: no samples");
    TrialReport r;
    r.trials = values.size();
    r.seed = seed;
    r.mean = compensated_sum(values) / static_cast<double>(values.size());
    CompensatedSum sq;
    for (double v : values) sq.add((v - r.mean) * (v - r.mean));
    const double var =
        values.size() > 1 ? sq.value() / static_cast<double>(values.size() - 1) : 0.0;
    r.std_error = std::sqrt(var / static_cast<double>(values.size()));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    r.min = *lo;
    r.max = *hi;
    // Guard the min <= mean <= max invariant against last-bit rounding.
    r.mean = std::clamp(r.mean, r.min, r.max);
    return r;
  }
};

/// Worker count from MGWT_WORKERS, defaulting to the hardware concurrency.
inline std::size_t default_worker_count() {
  if (const char* env = std::getenv("MGWT_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, n) and returns the results indexed by i.
///
/// Trial indices are split into `workers` contiguous blocks of
/// ceil(n / workers). Because every fn(i) draws from its own substream and
/// results land at index i, the output does not depend on the worker count.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, std::size_t workers = default_worker_count())
    -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t block = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(n, (w + 1) * block);
        for (std::size_t i = w * block; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace mgwt
