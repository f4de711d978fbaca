#pragma once

#include <functional>
#include <optional>

#include "nare/linalg.hpp"
#include "nare/problem.hpp"
#include "nare/shift.hpp"
#include "nare/solution.hpp"

namespace nare {

struct SdaConfig {
  std::optional<double> gamma;  // default: max diagonal entry of A and D
  std::optional<double> tol;    // default: n^2 eps
  int max_iter = 100;
  StopRule stop_rule = StopRule::Either;
};

struct SdaState {
  DenseMatrix e, f, g, h;
  int k = 0;
  double gamma = 0.0;
};

/// max(max_i A_ii, max_i D_ii)
double auto_gamma(const CoefficientQuadruple& quad);

/// Doubling initialisation with A_g = A + gI, D_g = D + gI,
/// W = A_g - B D_g^-1 C, V = D_g - C A_g^-1 B:
///   E0 = I - 2g V^-1, F0 = I - 2g W^-1,
///   G0 = 2g D_g^-1 C W^-1, H0 = 2g W^-1 B D_g^-1.
/// Throws SingularMatrix when any of the inner matrices is singular.
SdaState sda_init(const CoefficientQuadruple& quad, const SdaConfig& config = {});

/// One doubling step:
///   E' = E (I - GH)^-1 E,         F' = F (I - HG)^-1 F,
///   G' = G + E (I - GH)^-1 G F,   H' = H + F (I - HG)^-1 H E.
/// Throws BreakdownError (carrying the new step index) on a singular solve.
SdaState sda_step(const SdaState& state);

using SdaObserver = std::function<void(const SdaState&)>;

/// Iterates to convergence. Err is the larger relative update of G and H
/// (+inf at k = 0); Res is the normalized residual of H_k against
/// `problem` when given, otherwise |R(H_k)| scaled by the quadruple norms.
/// Reaching max_iter is not an error: the result has converged == false.
Solution sda_solve(const CoefficientQuadruple& quad, const SdaConfig& config = {},
                   const TransportProblem* problem = nullptr, const SdaObserver& observer = {});

/// Convenience: unshifted, or shifted via `shift` (critical case only).
/// Res in the history is always that of the original equation; with a
/// shift the stop rule tests the shifted equation's residual instead.
Solution sda_solve(const TransportProblem& problem, const std::optional<ShiftSpec>& shift,
                   const SdaConfig& config = {}, const SdaObserver& observer = {});

}  // namespace nare
