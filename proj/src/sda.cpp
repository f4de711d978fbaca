#include "nare/sda.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nare/diagnostics.hpp"
#include "nare/error.hpp"

namespace nare {

namespace {

// Column blocks [a | b] of equal height.
DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = out.row(i);
    std::copy(a.row(i).begin(), a.row(i).end(), r.begin());
    std::copy(b.row(i).begin(), b.row(i).end(), r.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

DenseMatrix columns(const DenseMatrix& m, std::size_t first, std::size_t count) {
  DenseMatrix out(m.rows(), count);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    std::copy(r.begin() + static_cast<std::ptrdiff_t>(first), r.begin() + static_cast<std::ptrdiff_t>(first + count),
              out.row(i).begin());
  }
  return out;
}

DenseMatrix shifted_identity(const DenseMatrix& m, double s) {
  DenseMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) += s;
  return out;
}

double quadruple_residual(const CoefficientQuadruple& quad, const DenseMatrix& x) {
  const double nx = inf_norm(x);
  const double den = nx * nx * inf_norm(quad.c) + nx * inf_norm(quad.d) + inf_norm(quad.a) * nx + inf_norm(quad.b);
  return den == 0.0 ? 0.0 : inf_norm(riccati_residual(quad, x)) / den;
}

}  // namespace

double auto_gamma(const CoefficientQuadruple& quad) {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < quad.size(); ++i) g = std::max({g, quad.a(i, i), quad.d(i, i)});
  return g;
}

SdaState sda_init(const CoefficientQuadruple& quad, const SdaConfig& config) {
  const std::size_t n = quad.size();
  const double gamma = config.gamma.value_or(auto_gamma(quad));
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw NareError(ErrorKind::InvalidParams, "gamma must be positive");

  const DenseMatrix id = DenseMatrix::identity(n);
  const DenseMatrix ag = shifted_identity(quad.a, gamma);
  const DenseMatrix dg = shifted_identity(quad.d, gamma);
  const LuFactorization dg_lu(dg);
  const LuFactorization ag_lu(ag);

  const DenseMatrix dinv_c = dg_lu.solve(quad.c);
  const DenseMatrix w = ag - quad.b * dinv_c;
  const DenseMatrix v = dg - quad.c * ag_lu.solve(quad.b);
  const DenseMatrix winv = lu_solve(w, id);
  const DenseMatrix vinv = lu_solve(v, id);
  const DenseMatrix dinv = dg_lu.solve(id);

  const double two_g = 2.0 * gamma;
  SdaState s;
  s.gamma = gamma;
  s.e = id - two_g * vinv;
  s.f = id - two_g * winv;
  s.g = two_g * (dinv_c * winv);
  s.h = two_g * (winv * (quad.b * dinv));
  return s;
}

SdaState sda_step(const SdaState& state) {
  const std::size_t n = state.e.rows();
  const DenseMatrix id = DenseMatrix::identity(n);
  const int next = state.k + 1;

  DenseMatrix se, sf;
  try {
    // (I - GH)^-1 [E | G] and (I - HG)^-1 [F | H]
    se = lu_solve(id - state.g * state.h, hstack(state.e, state.g));
    sf = lu_solve(id - state.h * state.g, hstack(state.f, state.h));
  } catch (const NareError& err) {
    throw BreakdownError(next, err.what());
  }

  SdaState out;
  out.gamma = state.gamma;
  out.k = next;
  out.e = state.e * columns(se, 0, n);
  out.f = state.f * columns(sf, 0, n);
  out.g = state.g + state.e * columns(se, n, n) * state.f;
  out.h = state.h + state.f * columns(sf, n, n) * state.e;
  if (!out.g.all_finite() || !out.h.all_finite() || !out.e.all_finite() || !out.f.all_finite()) {
    throw BreakdownError(next, "non-finite iterate");
  }
  return out;
}

namespace {

using ResidualFn = std::function<double(const DenseMatrix&)>;

// `reported` fills res_history; `stopping` feeds the stop rule.
Solution run_sda(const CoefficientQuadruple& quad, const SdaConfig& config, const ResidualFn& reported,
                 const ResidualFn& stopping, const SdaObserver& observer) {
  const double tol = config.tol.value_or(default_tolerance(quad.size()));

  SdaState state = sda_init(quad, config);
  if (observer) observer(state);

  Solution sol;
  sol.gamma = state.gamma;
  sol.tol = tol;
  sol.err_history.push_back(std::numeric_limits<double>::infinity());
  sol.res_history.push_back(reported(state.h));

  while (state.k < config.max_iter) {
    SdaState next = sda_step(state);
    const double err = std::max(relative_update_error(state.g, next.g), relative_update_error(state.h, next.h));
    state = std::move(next);
    if (observer) observer(state);
    const double res = reported(state.h);
    sol.err_history.push_back(err);
    sol.res_history.push_back(res);
    if (should_stop(config.stop_rule, err, stopping ? stopping(state.h) : res, tol)) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = state.k;
  sol.x = std::move(state.h);
  sol.y = std::move(state.g);
  return sol;
}

}  // namespace

Solution sda_solve(const CoefficientQuadruple& quad, const SdaConfig& config, const TransportProblem* problem,
                   const SdaObserver& observer) {
  const ResidualFn reported = [&](const DenseMatrix& x) {
    return problem != nullptr ? normalized_residual(*problem, x) : quadruple_residual(quad, x);
  };
  return run_sda(quad, config, reported, {}, observer);
}

Solution sda_solve(const TransportProblem& problem, const std::optional<ShiftSpec>& shift, const SdaConfig& config,
                   const SdaObserver& observer) {
  if (!shift) return sda_solve(problem.quad, config, &problem, observer);
  const ShiftSpec& sh = *shift;
  return run_sda(
      shifted_coefficients(problem, sh), config, [&](const DenseMatrix& x) { return normalized_residual(problem, x); },
      [&](const DenseMatrix& x) { return normalized_residual(problem, sh, x); }, observer);
}

}  // namespace nare
