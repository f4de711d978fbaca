#include "nare/shift.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nare/error.hpp"

namespace nare {

namespace {

constexpr double kEps = 0x1p-52;

[[noreturn]] void out_of_region(const std::string& inequality, double eta, double xi) {
  std::ostringstream os;
  os.precision(17);
  os << "(eta, xi) = (" << eta << ", " << xi << ") violates " << inequality;
  throw NareError(ErrorKind::ShiftOutOfRegion, os.str());
}

void add_outer(DenseMatrix& m, double scale, const Vector& u, const Vector& v) {
  if (scale == 0.0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double su = scale * u[i];
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += su * v[j];
  }
}

}  // namespace

double xi_lower_bound(double eta, double omega1) noexcept { return (-1.0 + eta * omega1) / omega1; }

void validate_shift(double eta, double xi, ShiftMode mode, double omega1, bool relaxed) {
  if (!(omega1 > 0.0 && omega1 < 1.0)) {
    throw NareError(ErrorKind::InvalidParams, "omega1 must lie in (0, 1)");
  }
  if (!std::isfinite(eta) || !std::isfinite(xi)) out_of_region("finiteness", eta, xi);

  const double eta_max = 1.0 / omega1;
  const double slack = 8.0 * kEps * eta_max;

  if (relaxed) {
    if (eta < 0.0) out_of_region("0 <= eta", eta, xi);
    if (eta > eta_max + slack) out_of_region("eta <= 1/omega1", eta, xi);
  } else {
    if (!(eta > 0.0)) out_of_region("0 < eta", eta, xi);
    if (mode == ShiftMode::Single) {
      if (eta > eta_max + slack) out_of_region("eta <= 1/omega1", eta, xi);
    } else {
      if (!(eta < eta_max)) out_of_region("eta < 1/omega1", eta, xi);
    }
  }

  if (mode == ShiftMode::Single) {
    if (xi != 0.0) out_of_region("xi = 0 (single shift)", eta, xi);
    return;
  }

  const double lower = xi_lower_bound(eta, omega1);
  if (xi < lower - slack) out_of_region("(-1 + eta*omega1)/omega1 <= xi", eta, xi);
  if (relaxed) {
    if (xi > 0.0) out_of_region("xi <= 0", eta, xi);
  } else if (!(xi < 0.0)) {
    out_of_region("xi < 0", eta, xi);
  }
}

ShiftSpec make_shift(const TransportProblem& problem, double eta, double xi, ShiftMode mode, bool relaxed) {
  require_critical(problem, "shift construction");
  validate_shift(eta, xi, mode, problem.omega1(), relaxed);
  return {eta, xi, mode, critical_eigenvectors(problem)};
}

ShiftSpec default_shift(const TransportProblem& problem, ShiftMode mode) {
  require_critical(problem, "default_shift");
  const double w1 = problem.omega1();
  const double eta = 1.0 / (2.0 * w1);
  const double xi = mode == ShiftMode::Single ? 0.0 : -1.0 / (2.0 * w1);
  return make_shift(problem, eta, xi, mode);
}

CoefficientQuadruple shifted_coefficients_unchecked(const TransportProblem& problem, double eta, double xi) {
  const auto ev = critical_eigenvectors(problem);
  CoefficientQuadruple q = problem.quad;
  add_outer(q.d, eta, ev.v1, ev.r1);
  add_outer(q.d, xi, ev.s1, ev.u1);
  add_outer(q.c, -eta, ev.v1, ev.r2);
  add_outer(q.c, -xi, ev.s1, ev.u2);
  add_outer(q.b, eta, ev.v2, ev.r1);
  add_outer(q.b, xi, ev.s2, ev.u1);
  add_outer(q.a, -eta, ev.v2, ev.r2);
  add_outer(q.a, -xi, ev.s2, ev.u2);
  q.tag = xi == 0.0 ? StructureTag::SingleShift : StructureTag::DoubleShift;
  q.eta = eta;
  q.xi = xi;
  return q;
}

CoefficientQuadruple shifted_coefficients(const TransportProblem& problem, const ShiftSpec& shift) {
  require_critical(problem, "shifted_coefficients");
  validate_shift(shift.eta, shift.xi, shift.mode, problem.omega1());
  CoefficientQuadruple q = shifted_coefficients_unchecked(problem, shift.eta, shift.xi);
  q.tag = shift.mode == ShiftMode::Single ? StructureTag::SingleShift : StructureTag::DoubleShift;
  return q;
}

LowRankFactors low_rank_factors(const TransportProblem& problem, const ShiftSpec& shift) {
  require_critical(problem, "low_rank_factors");
  validate_shift(shift.eta, shift.xi, shift.mode, problem.omega1(), /*relaxed=*/true);
  const std::size_t n = problem.size();
  const double eta = shift.eta;
  const double xi = shift.xi;

  LowRankFactors f{DenseMatrix(n, 2), DenseMatrix(n, 2), DenseMatrix(n, 2), DenseMatrix(n, 2)};
  for (std::size_t i = 0; i < n; ++i) {
    const double qi = problem.q[i];
    const double ginv = 1.0 / problem.gamma[i];
    const double dinv = 1.0 / problem.delta[i];
    f.q1(i, 0) = (1.0 - eta * ginv) * qi;
    f.q1(i, 1) = qi;
    f.q2(i, 0) = qi;
    f.q2(i, 1) = xi * dinv * qi;
    f.e1(i, 0) = 1.0;
    f.e1(i, 1) = -xi * ginv;
    f.e2(i, 0) = 1.0 + eta * dinv;
    f.e2(i, 1) = 1.0;
  }
  return f;
}

}  // namespace nare
