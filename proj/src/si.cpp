#include "nare/si.hpp"

#include <algorithm>
#include <limits>

#include "nare/diagnostics.hpp"
#include "nare/error.hpp"

namespace nare {

HadamardKernel build_kernel(const TransportProblem& problem) {
  const std::size_t n = problem.size();
  HadamardKernel k{DenseMatrix(n, n), DenseMatrix(n, n), DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = 1.0 / (problem.delta[i] + problem.gamma[j]);
      k.t(i, j) = t;
      k.p(i, j) = problem.q[j] * t;
      k.qm(i, j) = problem.q[j] / (problem.delta[j] + problem.gamma[i]);
    }
  }
  return k;
}

DenseMatrix mn_to_solution(const HadamardKernel& kernel, const DenseMatrix& m, const DenseMatrix& n) {
  const std::size_t dim = kernel.t.rows();
  if (m.rows() != dim || n.rows() != dim || m.cols() != n.cols()) {
    throw NareError(ErrorKind::InvalidSize, "mn_to_solution: factor shapes");
  }
  DenseMatrix z(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto mi = m.row(i);
    auto zi = z.row(i);
    const auto ti = kernel.t.row(i);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto nj = n.row(j);
      double s = 0.0;
      for (std::size_t c = 0; c < mi.size(); ++c) s += mi[c] * nj[c];
      zi[j] = ti[j] * s;
    }
  }
  return z;
}

Solution si_solve(const TransportProblem& problem, const SiConfig& config, const SiObserver& observer) {
  const std::size_t dim = problem.size();
  const double tol = config.tol.value_or(default_tolerance(dim));
  const HadamardKernel kernel = build_kernel(problem);

  SiState state{Vector(dim, 0.0), Vector(dim, 0.0), 0};
  Solution sol;
  sol.tol = tol;
  auto form_x = [&](const SiState& s) {
    return mn_to_solution(kernel, DenseMatrix::column(s.m), DenseMatrix::column(s.n));
  };

  DenseMatrix x(dim, dim);
  while (state.k < config.max_iter) {
    const Vector pn = matvec(kernel.p, state.n);
    const Vector qm = matvec(kernel.qm, state.m);
    SiState next{Vector(dim), Vector(dim), state.k + 1};
    for (std::size_t i = 0; i < dim; ++i) {
      next.m[i] = state.m[i] * pn[i] + 1.0;
      next.n[i] = state.n[i] * qm[i] + 1.0;
    }
    const double err =
        std::max(relative_update_error(state.m, next.m), relative_update_error(state.n, next.n));
    state = std::move(next);
    if (observer) observer(state);
    x = form_x(state);
    const double res = normalized_residual(problem, x);
    sol.err_history.push_back(err);
    sol.res_history.push_back(res);
    if (should_stop(config.stop_rule, err, res, tol)) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = state.k;
  sol.x = std::move(x);
  return sol;
}

Solution si_shifted_solve(const TransportProblem& problem, const ShiftSpec& shift, const SiConfig& config,
                          const SiShiftObserver& observer) {
  require_critical(problem, "si_shifted_solve");
  const double eta = shift.eta;
  const double xi = shift.xi;
  validate_shift(eta, xi, shift.mode, problem.omega1(), /*relaxed=*/true);

  const std::size_t dim = problem.size();
  const double tol = config.tol.value_or(default_tolerance(dim));
  const HadamardKernel kernel = build_kernel(problem);

  // Fixed vectors of the update.
  Vector q_shift(dim), e_shift(dim), dinv_q(dim), ginv_e(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double ginv = 1.0 / problem.gamma[i];
    const double dinv = 1.0 / problem.delta[i];
    q_shift[i] = (1.0 - eta * ginv) * problem.q[i];
    e_shift[i] = 1.0 + eta * dinv;
    dinv_q[i] = dinv * problem.q[i];
    ginv_e[i] = ginv;
  }

  SiShiftState state{DenseMatrix(dim, 2), DenseMatrix(dim, 2), DenseMatrix(dim, dim), 0};
  Solution sol;
  sol.tol = tol;

  while (state.k < config.max_iter) {
    const Vector zq = matvec(state.z, problem.q);
    const Vector zq_shift = matvec(state.z, q_shift);
    const Vector ztq = matvec_transposed(state.z, problem.q);
    const Vector zt_dinv_q = matvec_transposed(state.z, dinv_q);

    SiShiftState next{DenseMatrix(dim, 2), DenseMatrix(dim, 2), DenseMatrix(), state.k + 1};
    for (std::size_t i = 0; i < dim; ++i) {
      next.mk(i, 0) = zq_shift[i] + e_shift[i];
      next.mk(i, 1) = zq[i] + 1.0;
      next.nk(i, 0) = ztq[i] + 1.0;
      next.nk(i, 1) = -xi * (ginv_e[i] - zt_dinv_q[i]);
    }
    next.z = mn_to_solution(kernel, next.mk, next.nk);

    const double err =
        std::max(relative_update_error(state.mk, next.mk), relative_update_error(state.nk, next.nk));
    state = std::move(next);
    if (observer) observer(state);
    const double res = normalized_residual(problem, state.z);
    sol.err_history.push_back(err);
    sol.res_history.push_back(res);
    if (should_stop(config.stop_rule, err, normalized_residual(problem, shift, state.z), tol)) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = state.k;
  sol.x = std::move(state.z);
  return sol;
}

}  // namespace nare
