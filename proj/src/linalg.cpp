#include "nare/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nare/error.hpp"

namespace nare {

namespace {

constexpr double kEps = 0x1p-52;

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw NareError(ErrorKind::InvalidSize, std::string(op) + ": shape mismatch");
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotCriticalCase: return "NotCriticalCase";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::ShiftOutOfRegion: return "ShiftOutOfRegion";
    case ErrorKind::Breakdown: return "Breakdown";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw NareError(ErrorKind::InvalidSize, "ragged matrix literal");
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> v) {
  DenseMatrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.entries_.begin());
  return m;
}

DenseMatrix DenseMatrix::from_columns(std::initializer_list<std::span<const double>> cols) {
  const std::size_t k = cols.size();
  const std::size_t n = k == 0 ? 0 : cols.begin()->size();
  DenseMatrix m(n, k);
  std::size_t j = 0;
  for (const auto& c : cols) {
    if (c.size() != n) throw NareError(ErrorKind::InvalidSize, "from_columns: length mismatch");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = c[i];
    ++j;
  }
  return m;
}

DenseMatrix DenseMatrix::outer(std::span<const double> u, std::span<const double> v) {
  DenseMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) r[j] = u[i] * v[j];
  }
  return m;
}

Vector DenseMatrix::col(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
  for (double& x : entries_) x *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw NareError(ErrorKind::InvalidSize, "matrix product: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    const auto ai = a.row(i);
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < ci.size(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] *= bd[k];
  return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw NareError(ErrorKind::InvalidSize, "matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < ai.size(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw NareError(ErrorKind::InvalidSize, "matvec_transposed: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < ai.size(); ++j) y[j] += ai[j] * xi;
  }
  return y;
}

double inf_norm(const DenseMatrix& a) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double x : a.row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

double inf_norm(std::span<const double> v) noexcept {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < ad.size(); ++k) best = std::max(best, std::abs(ad[k] - bd[k]));
  return best;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.is_square()) throw NareError(ErrorKind::InvalidSize, "LU of a non-square matrix");
  const std::size_t n = lu_.rows();
  const double threshold = static_cast<double>(n) * kEps * inf_norm(lu_);
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > threshold)) {
      throw NareError(ErrorKind::SingularMatrix,
                      "pivot " + std::to_string(best) + " at column " + std::to_string(k) + " below threshold");
    }
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    const double pivot = lu_(k, k);
    const auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const double l = ri[k] / pivot;
      ri[k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

DenseMatrix LuFactorization::solve(const DenseMatrix& b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw NareError(ErrorKind::InvalidSize, "LU solve: right-hand side has wrong row count");
  const std::size_t m = b.cols();
  DenseMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = b.row(perm_[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  // Forward substitution with unit lower factor.
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    const auto li = lu_.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double l = li[k];
      if (l == 0.0) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    const auto ui = lu_.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double u = ui[k];
      if (u == 0.0) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= u * xk[j];
    }
    const double d = ui[ii];
    for (std::size_t j = 0; j < m; ++j) xi[j] /= d;
  }
  return x;
}

Vector LuFactorization::solve(std::span<const double> b) const {
  DenseMatrix x = solve(DenseMatrix::column(b));
  return {x.data().begin(), x.data().end()};
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows()) {
    throw NareError(ErrorKind::InvalidSize, "lu_solve: A must be square with as many rows as B");
  }
  return LuFactorization(a).solve(b);
}

}  // namespace nare
