#include "nare/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nare/error.hpp"
#include "nare/solution.hpp"

namespace nare {

double default_tolerance(std::size_t n) noexcept { return static_cast<double>(n * n) * 0x1p-52; }

bool should_stop(StopRule rule, double err, double res, double tol) noexcept {
  switch (rule) {
    case StopRule::Error:
      return err < tol;
    case StopRule::Residual:
      return res < tol;
    case StopRule::Either:
      return err < tol || res < tol;
  }
  return false;
}

namespace {

// With a shift, the numerator is the shifted operator
//   R'(X) = R(X) - eta (X v1 - v2)(r2^T X + r1^T) - xi (X s1 - s2)(u2^T X + u1^T),
// evaluated in O(n^2).
double residual_impl(const TransportProblem& problem, const DenseMatrix& x, const ShiftSpec* shift) {
  const std::size_t n = problem.size();
  if (x.rows() != n || x.cols() != n) throw NareError(ErrorKind::InvalidSize, "normalized_residual: X shape");
  const Vector& q = problem.q;
  const Vector xq = matvec(x, q);
  const Vector qx = matvec_transposed(x, q);

  Vector a1, b1, a2, b2;
  double eta = 0.0, xi = 0.0;
  if (shift != nullptr) {
    const auto ev = critical_eigenvectors(problem);
    eta = shift->eta;
    xi = shift->xi;
    a1 = matvec(x, ev.v1);
    b1 = matvec_transposed(x, ev.r2);
    a2 = matvec(x, ev.s1);
    b2 = matvec_transposed(x, ev.u2);
    for (std::size_t i = 0; i < n; ++i) {
      a1[i] -= ev.v2[i];
      b1[i] += ev.r1[i];
      a2[i] -= ev.s2[i];
      b2[i] += ev.u1[i];
    }
  }

  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    const double li = xq[i] + 1.0;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // -R(X) entry
      double r = row[j] * problem.gamma[j] + problem.delta[i] * row[j] - li * (qx[j] + 1.0);
      if (shift != nullptr) r += eta * a1[i] * b1[j] + xi * a2[i] * b2[j];
      s += std::abs(r);
    }
    num = std::max(num, s);
  }
  const double nx = inf_norm(x);
  const double ng = inf_norm(std::span<const double>(problem.gamma));
  const double nd = inf_norm(std::span<const double>(problem.delta));
  const double nq = inf_norm(std::span<const double>(q));
  double nqt = 0.0;
  for (double v : q) nqt += std::abs(v);
  const double den = nx * ng + nx * nd + (nx * nq + 1.0) * (nqt * nx + static_cast<double>(n));
  return num / den;
}

}  // namespace

double normalized_residual(const TransportProblem& problem, const DenseMatrix& x) {
  return residual_impl(problem, x, nullptr);
}

double normalized_residual(const TransportProblem& problem, const ShiftSpec& shift, const DenseMatrix& x) {
  return residual_impl(problem, x, &shift);
}

DenseMatrix riccati_residual(const CoefficientQuadruple& quad, const DenseMatrix& x) {
  DenseMatrix r = x * quad.c * x;
  r -= x * quad.d;
  r -= quad.a * x;
  r += quad.b;
  return r;
}

double relative_update_error(const DenseMatrix& prev, const DenseMatrix& curr) {
  const double den = inf_norm(curr);
  const double num = inf_norm(curr - prev);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double relative_update_error(std::span<const double> prev, std::span<const double> curr) {
  if (prev.size() != curr.size()) throw NareError(ErrorKind::InvalidSize, "relative_update_error: lengths");
  const double den = inf_norm(curr);
  double num = 0.0;
  for (std::size_t i = 0; i < curr.size(); ++i) num = std::max(num, std::abs(curr[i] - prev[i]));
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

IdentityGaps solution_identities(const TransportProblem& problem, const DenseMatrix& x, const DenseMatrix* y) {
  const auto ev = critical_eigenvectors(problem);
  const std::size_t n = problem.size();
  IdentityGaps g;

  const Vector xv1 = matvec(x, ev.v1);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) num = std::max(num, std::abs(xv1[i] - ev.v2[i]));
  g.xv1_minus_v2 = num / inf_norm(std::span<const double>(ev.v2));

  const Vector u2x = matvec_transposed(x, ev.u2);
  num = 0.0;
  for (std::size_t i = 0; i < n; ++i) num = std::max(num, std::abs(u2x[i] + ev.u1[i]));
  g.u2x_plus_u1 = num / inf_norm(std::span<const double>(ev.u1));

  const double nx = inf_norm(x);
  g.symmetry_gap = nx == 0.0 ? 0.0 : inf_norm(x - x.transpose()) / nx;

  if (y != nullptr) {
    const Vector u1y = matvec_transposed(*y, ev.u1);
    num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num = std::max(num, std::abs(u1y[i] + ev.u2[i]));
    g.u1y_plus_u2 = num / inf_norm(std::span<const double>(ev.u2));
  }
  return g;
}

double shift_equivalence_gap(const TransportProblem& problem, const ShiftSpec& shift, const DenseMatrix& x) {
  const auto shifted = shifted_coefficients(problem, shift);
  const DenseMatrix diff = riccati_residual(shifted, x) - riccati_residual(problem.quad, x);
  const double nx = inf_norm(x);
  return inf_norm(diff) / (1.0 + nx * nx);
}

const char* to_string(MatrixVerdict v) noexcept {
  switch (v) {
    case MatrixVerdict::NonsingularM:
      return "nonsingular_m_matrix";
    case MatrixVerdict::SingularOrNotM:
      return "singular_or_not";
    case MatrixVerdict::ZPatternViolation:
      return "z_matrix_violation";
  }
  return "unknown";
}

bool is_z_matrix(const DenseMatrix& a) {
  const double tol = 1e-14 * inf_norm(a);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) > tol) return false;
    }
  }
  return true;
}

MatrixVerdict certify_m_matrix(const DenseMatrix& a) {
  if (!a.is_square()) throw NareError(ErrorKind::InvalidSize, "certify_m_matrix: not square");
  if (!is_z_matrix(a)) return MatrixVerdict::ZPatternViolation;
  DenseMatrix inv;
  try {
    inv = lu_solve(a, DenseMatrix::identity(a.rows()));
  } catch (const NareError&) {
    return MatrixVerdict::SingularOrNotM;
  }
  if (!inv.all_finite()) return MatrixVerdict::SingularOrNotM;
  const double floor = -1e-12 * inf_norm(inv);
  for (double v : inv.data()) {
    if (v < floor) return MatrixVerdict::SingularOrNotM;
  }
  return MatrixVerdict::NonsingularM;
}

ConvergenceEstimate convergence_order(std::span<const double> history, std::size_t window) {
  std::size_t start = history.size();
  while (start > 0 && std::isfinite(history[start - 1]) && history[start - 1] > 0.0) --start;
  auto usable = history.subspan(start);
  if (window > 0 && usable.size() > window) usable = usable.subspan(usable.size() - window);
  if (usable.size() < 4) {
    throw NareError(ErrorKind::InsufficientHistory, "convergence_order needs at least 4 positive entries");
  }

  const std::size_t m = usable.size() - 1;
  double log_rate = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = std::log(usable[k]);
    const double y = std::log(usable[k + 1]);
    log_rate += y - x;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dm = static_cast<double>(m);
  ConvergenceEstimate est;
  est.rate = std::exp(log_rate / dm);
  const double den = dm * sxx - sx * sx;
  est.order = den == 0.0 ? 1.0 : (dm * sxy - sx * sy) / den;
  return est;
}

}  // namespace nare
