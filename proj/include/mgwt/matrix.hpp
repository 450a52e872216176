#pragma once

/// @file
/// Dense real matrices, Gaussian sampling, column selection and Gram-matrix
/// log-determinants.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgwt/errors.hpp"
#include "mgwt/random.hpp"
#include "mgwt/specfun.hpp"
#include "mgwt/support.hpp"

namespace mgwt {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense m x p real matrix, row-major. Zero rows are allowed (an eavesdropper
/// with m_e = 0).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) throw DimensionMismatch("Matrix: entry count != rows * cols");
    for (double v : data_) {
      if (!std::isfinite(v)) throw DomainError("Matrix: entries must be finite");
    }
  }

  static Matrix identity(std::size_t n) { return identity_rows(n, n); }

  /// First `m` rows of the p x p identity.
  static Matrix identity_rows(std::size_t m, std::size_t p) {
    Matrix a(m, p);
    for (std::size_t i = 0; i < std::min(m, p); ++i) a(i, i) = 1.0;
    return a;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const double> data() const { return data_; }

  [[nodiscard]] Eigen::Map<const RowMajorMatrix> view() const {
    return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
  }

  static Matrix from_eigen(const Eigen::MatrixXd& m) {
    Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr std::uint64_t kMaxMatrixEntries = 1'000'000'000;

/// m x p matrix of i.i.d. N(0, 1) entries, filled row by row from `rng`.
inline Matrix sample_gaussian_matrix(std::size_t m, std::size_t p, SeededStream rng) {
  if (m == 0 || p == 0) throw DomainError("sample_gaussian_matrix: m and p must be positive");
  if (m > kMaxMatrixEntries / p) {
    throw AllocationError("sample_gaussian_matrix: m * p exceeds 1e9 entries");
  }
  Generator gen(rng);
  std::vector<double> data(m * p);
  for (double& v : data) v = gen.normal();
  return Matrix(m, p, std::move(data));
}

/// A(x): the columns of `a` listed by `x`, in index order.
inline Matrix submatrix_columns(const Matrix& a, const Support& x) {
  if (x.ambient() != a.cols()) throw DimensionMismatch("submatrix_columns: support ambient != cols");
  Matrix out(a.rows(), x.weight());
  const auto& idx = x.indices();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = a(i, idx[j]);
  return out;
}

namespace detail {

// A(x) gathered column-major so the rank update reads contiguous columns.
inline Eigen::MatrixXd gather_columns(const Matrix& a, const Support& x) {
  const auto m = static_cast<Eigen::Index>(a.rows());
  const auto& idx = x.indices();
  Eigen::MatrixXd b(m, static_cast<Eigen::Index>(idx.size()));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double* row = a.data().data() + static_cast<std::size_t>(i) * a.cols();
    for (std::size_t j = 0; j < idx.size(); ++j) b(i, static_cast<Eigen::Index>(j)) = row[idx[j]];
  }
  return b;
}

}  // namespace detail

/// Relative pivot threshold below which a Gram factorization is declared singular.
inline constexpr double kSingularityThreshold = 1e-10;

/// Natural log of det(A(x) A(x)^T) from a Cholesky factor of the Gram matrix.
/// Throws SingularGram when a factor diagonal is below 1e-10 times the largest one.
inline double gram_logdet_nats_unnormalized(const Matrix& a, const Support& x) {
  if (x.ambient() != a.cols()) throw DimensionMismatch("gram_logdet: support ambient != cols");
  const auto m = static_cast<Eigen::Index>(a.rows());
  if (m == 0) return 0.0;
  if (x.weight() < a.rows()) {
    throw DimensionMismatch("gram_logdet: support weight must be at least the row count");
  }
  const Eigen::MatrixXd b = detail::gather_columns(a, x);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(b);
  const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  if (llt.info() != Eigen::Success) throw SingularGram("gram_logdet: Gram matrix is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  const double largest = diag.maxCoeff();
  if (!(diag.minCoeff() >= kSingularityThreshold * largest)) {
    throw SingularGram("gram_logdet: factor diagonal below relative threshold 1e-10");
  }
  return 2.0 * diag.array().log().sum();
}

/// log2 det((1 / normalizer) A(x) A(x)^T).
inline double gram_logdet(const Matrix& a, const Support& x, double normalizer) {
  if (!(normalizer > 0.0)) throw DomainError("gram_logdet: normalizer must be positive");
  const double ld = gram_logdet_nats_unnormalized(a, x);
  return (ld - static_cast<double>(a.rows()) * std::log(normalizer)) * kLog2E;
}

/// Squared column norms ||A(i)||^2.
inline std::vector<double> column_norms_sq(const Matrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * a(i, j);
  return out;
}

/// max_i (1/m) ||A(i)||^2; zero for a matrix with no rows or columns.
inline double max_column_norm_sq(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const auto norms = column_norms_sq(a);
  return *std::max_element(norms.begin(), norms.end()) / static_cast<double>(a.rows());
}

/// True iff every m-column submatrix of the m x p matrix is nonsingular
/// (Kruskal rank m). This is sufficient for full linear independence: two
/// distinct (m-1)-supports spanning one subspace would put at least m columns
/// in an (m-1)-dimensional space.
inline bool is_fli_sufficient(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t p = a.cols();
  if (m > p) throw DomainError("is_fli_sufficient: need rows <= cols");
  if (m == 0) return true;
  for (const Support& x : enumerate_supports(p, m)) {
    try {
      (void)gram_logdet_nats_unnormalized(a, x);
    } catch (const SingularGram&) {
      return false;
    }
  }
  return true;
}

}  // namespace mgwt
