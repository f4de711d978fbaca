#pragma once

#include <optional>

#include "nare/linalg.hpp"

namespace nare {

enum class StopRule { Error, Residual, Either };

/// n^2 * 2^-52, the default stopping threshold.
double default_tolerance(std::size_t n) noexcept;

/// Result of any solver. `x` is the best iterate even when the iteration
/// cap was reached (converged == false).
struct Solution {
  DenseMatrix x;
  std::optional<DenseMatrix> y;  // dual solution, SDA only
  int iterations = 0;
  Vector err_history;
  Vector res_history;
  bool converged = false;
  double gamma = 0.0;  // SDA only
  double tol = 0.0;

  double res_final() const noexcept { return res_history.empty() ? 0.0 : res_history.back(); }
  double err_final() const noexcept { return err_history.empty() ? 0.0 : err_history.back(); }
};

/// Whether err/res meet the rule at tolerance tol.
bool should_stop(StopRule rule, double err, double res, double tol) noexcept;

}  // namespace nare
