#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nare {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  /// n x 1 matrix holding `v`.
  static DenseMatrix column(std::span<const double> v);
  /// n x k matrix whose columns are the given vectors (all of equal length).
  static DenseMatrix from_columns(std::initializer_list<std::span<const double>> cols);
  /// u v^T
  static DenseMatrix outer(std::span<const double> u, std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;

  std::span<double> data() noexcept { return entries_; }
  std::span<const double> data() const noexcept { return entries_; }

  DenseMatrix transpose() const;
  bool all_finite() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(DenseMatrix a, double s);
DenseMatrix operator*(double s, DenseMatrix a);
/// Matrix product.
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Entrywise (Hadamard) product.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T x without forming the transpose.
Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x);

/// Max row sum of absolute values.
double inf_norm(const DenseMatrix& a) noexcept;
/// Max absolute entry.
double inf_norm(std::span<const double> v) noexcept;
/// Largest absolute entry of a - b.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// LU factorization with partial (row) pivoting.
///
/// Construction throws SingularMatrix when a pivot magnitude falls below
/// n * eps * ||A||_inf with eps = 2^-52.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a);

  std::size_t size() const noexcept { return lu_.rows(); }
  DenseMatrix solve(const DenseMatrix& b) const;
  Vector solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A X = B.
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace nare
