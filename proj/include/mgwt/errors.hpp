#pragma once

#include <stdexcept>
#include <string>

namespace mgwt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An index or rank is outside the valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Requested allocation exceeds the size guard.
class AllocationError : public Error {
 public:
  using Error::Error;
};

/// A Gram factorization met a pivot below the relative singularity threshold.
class SingularGram : public Error {
 public:
  using Error::Error;
};

/// C(p, k) exceeds the enumeration guard; use a sampled estimator instead.
class TooManySupports : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// No support explains the observation within tolerance.
class NoCandidate : public Error {
 public:
  using Error::Error;
};

/// Two or more supports explain the observation within tolerance.
class AmbiguousDecode : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace mgwt
