#pragma once

/// @file
/// Binary support vectors x in X_k^p stored as sorted index sets, and the
/// combinatorial number system that ranks them in colexicographic order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mgwt/errors.hpp"
#include "mgwt/random.hpp"

namespace mgwt {

/// Hard cap on C(p, k) for exhaustive sums and minima over supports.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;

/// Exact C(n, k), or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

class Support {
 public:
  Support() = default;

  /// Validates that `indices` is strictly increasing and below `ambient`.
  Support(std::size_t ambient, std::vector<std::size_t> indices)
      : ambient_(ambient), indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] >= ambient_) throw RangeError("Support: index outside [0, p)");
      if (i > 0 && indices_[i] <= indices_[i - 1]) {
        throw DomainError("Support: indices must be strictly increasing");
      }
    }
  }

  static Support full(std::size_t p) {
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    return Support(p, std::move(idx));
  }

  static Support empty(std::size_t p) { return Support(p, {}); }

  /// Builds a support from an unsorted collection of distinct indices.
  static Support from_unsorted(std::size_t p, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    return Support(p, std::move(idx));
  }

  [[nodiscard]] std::size_t ambient() const { return ambient_; }
  [[nodiscard]] std::size_t weight() const { return indices_.size(); }
  [[nodiscard]] double density() const {
    return ambient_ == 0 ? 0.0 : static_cast<double>(indices_.size()) / static_cast<double>(ambient_);
  }
  [[nodiscard]] const std::vector<std::size_t>& indices() const { return indices_; }
  [[nodiscard]] bool contains(std::size_t i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  /// 0/1 indicator vector of length p.
  [[nodiscard]] std::vector<double> indicator() const {
    std::vector<double> v(ambient_, 0.0);
    for (auto i : indices_) v[i] = 1.0;
    return v;
  }

  friend bool operator==(const Support&, const Support&) = default;

 private:
  std::size_t ambient_ = 0;
  std::vector<std::size_t> indices_;
};

/// Colexicographic rank: sum over i of C(c_i, i + 1) for ascending indices c_i.
inline std::uint64_t support_rank(const Support& x) {
  unsigned __int128 rank = 0;
  const auto& idx = x.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto c = binomial_u64(idx[i], i + 1);
    if (!c) throw RangeError("support_rank: rank does not fit in 64 bits");
    rank += *c;
  }
  if (rank > std::numeric_limits<std::uint64_t>::max()) {
    throw RangeError("support_rank: rank does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(rank);
}

/// The index-th k-subset of [0, p) in colexicographic order.
inline Support support_unrank(std::uint64_t index, std::size_t p, std::size_t k) {
  if (k > p) throw DomainError("support_unrank: need k <= p");
  const auto total = binomial_u64(p, k);
  if (!total) throw RangeError("support_unrank: C(p, k) does not fit in 64 bits");
  if (index >= *total) throw RangeError("support_unrank: index >= C(p, k)");

  std::vector<std::size_t> idx(k);
  std::size_t upper = p;  // next element is strictly below this
  for (std::size_t i = k; i > 0; --i) {
    // Largest c < upper with C(c, i) <= index. C(c-1, i) = C(c, i) (c - i) / c.
    std::size_t c = upper - 1;
    unsigned __int128 value = *binomial_u64(c, i);
    while (value > index) {
      value = value * (c - i) / c;
      --c;
    }
    idx[i - 1] = c;
    index -= static_cast<std::uint64_t>(value);
    upper = c;
  }
  return Support(p, std::move(idx));
}

/// Input range over every weight-k support of [0, p) in unrank order.
class SupportEnumeration {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Support;
    using difference_type = std::ptrdiff_t;
    using pointer = const Support*;
    using reference = const Support&;

    iterator() = default;
    iterator(std::size_t p, std::size_t k) : p_(p), done_(false) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      current_ = Support(p, std::move(idx));
    }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }

    iterator& operator++() {
      auto idx = current_.indices();
      const std::size_t k = idx.size();
      std::size_t j = 0;
      while (j < k) {
        const std::size_t limit = j + 1 < k ? idx[j + 1] : p_;
        if (idx[j] + 1 < limit) break;
        ++j;
      }
      if (j == k) {
        done_ = true;
        return *this;
      }
      ++idx[j];
      for (std::size_t i = 0; i < j; ++i) idx[i] = i;
      current_ = Support(p_, std::move(idx));
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& a, const iterator& b) {
      return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_);
    }

   private:
    std::size_t p_ = 0;
    bool done_ = true;
    Support current_;
  };

  SupportEnumeration(std::size_t p, std::size_t k) : p_(p), k_(k) {
    if (k > p) throw DomainError("enumerate_supports: need k <= p");
    const auto total = binomial_u64(p, k);
    if (!total || *total > kEnumerationGuard) {
      throw TooManySupports("enumerate_supports: C(" + std::to_string(p) + ", " +
                            std::to_string(k) + ") exceeds the enumeration guard of 1e6");
    }
    count_ = *total;
  }

  [[nodiscard]] iterator begin() const { return iterator(p_, k_); }
  [[nodiscard]] iterator end() const { return {}; }
  [[nodiscard]] std::uint64_t size() const { return count_; }

 private:
  std::size_t p_;
  std::size_t k_;
  std::uint64_t count_ = 0;
};

inline SupportEnumeration enumerate_supports(std::size_t p, std::size_t k) { return {p, k}; }

/// Uniform random weight-k support. Unranks a uniform rank when C(p, k) fits
/// in 64 bits, otherwise falls back to Floyd's subset sampler.
inline Support sample_support(std::size_t p, std::size_t k, Generator& gen) {
  if (k > p) throw DomainError("sample_support: need k <= p");
  if (const auto total = binomial_u64(p, k)) {
    return support_unrank(gen.below(*total), p, k);
  }
  std::unordered_set<std::size_t> chosen;
  std::vector<std::size_t> idx;
  idx.reserve(k);
  for (std::size_t j = p - k; j < p; ++j) {
    const auto t = static_cast<std::size_t>(gen.below(j + 1));
    const std::size_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    idx.push_back(pick);
  }
  return Support::from_unsorted(p, std::move(idx));
}

}  // namespace mgwt
