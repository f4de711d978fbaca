#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "nare/problem.hpp"
#include "nare/shift.hpp"

namespace nare {

/// A real number held as sign and natural log of its magnitude, so long
/// products of secular factors cannot overflow.
struct SignedLogValue {
  int sign = 0;  // -1, 0 or +1
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static SignedLogValue from(double x) noexcept;
  double value() const noexcept;

  friend SignedLogValue operator*(SignedLogValue a, SignedLogValue b) noexcept;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

struct LocatedRoot {
  double value = 0.0;
  Bracket bracket;
  double residual = 0.0;
  // The two roots of a pair coincide (tangency at the boundary of the
  // admissible region). Only set for shifted spectra.
  bool tangent = false;
};

struct SpectrumReport {
  // 0 and 1/omega_i for M; empty for the double-shifted matrix.
  std::vector<double> fixed_roots;
  std::vector<LocatedRoot> free_roots;
  // (eta, xi) sits on the closed lower xi boundary of the region.
  bool on_region_boundary = false;

  /// All eigenvalues in ascending order.
  std::vector<double> all_values() const;
};

/// det(M - lambda I) for the critical M, in the factored form
///   -lambda * prod_i (1/w_i - lambda)^2 * sum_j c_j / (1/w_j - lambda).
/// Throws PoleHit when lambda is within 1e-14 of some 1/w_i.
SignedLogValue secular_f(const TransportProblem& problem, double lambda);

struct GValues {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

/// g1 = lambda sum c_i/(1/w_i - lambda), g2 = sum c_i w_i/(1/w_i - lambda),
/// g3 = sum c_i/(w_i (1/w_i - lambda)).
GValues g_functions(const TransportProblem& problem, double lambda);

/// Scale-free characteristic function of the double-shifted M:
///   g(lambda) = g1 + eta xi g2 g3,
/// with det(M' - lambda I) = -prod (1/w_i - lambda)^2 g(lambda).
/// Throws ShiftOutOfRegion unless (eta, xi) is in the double-shift region.
double shifted_secular_g(const TransportProblem& problem, const ShiftSpec& shift, double lambda);

/// 0 < 1/w1 < mu_1 < 1/w2 < ... < mu_{n-1} < 1/w_n by bisection.
SpectrumReport eigenvalues_m(const TransportProblem& problem);

/// Two roots in (0, 1/w1) and two in every (1/w_k, 1/w_{k+1}).
SpectrumReport eigenvalues_m_shifted(const TransportProblem& problem, const ShiftSpec& shift);

/// Positive eigenvalues lambda_2 < ... < lambda_n of H, one in each
/// (1/w_{k}, 1/w_{k+1}); the spectrum of H is symmetric about 0 and 0 is a
/// double eigenvalue.
std::vector<LocatedRoot> eigenvalues_h_positive(const TransportProblem& problem);

/// (z - gamma) / (z + gamma). Throws PoleHit at z = -gamma.
double cayley(double z, double gamma);

/// rho(C_gamma(D - C X)) * rho(C_gamma(A - B Y)) using
///   sigma(D - C X) = {eta or 0, lambda_2, ..., lambda_n}
///   sigma(A - B Y) = {-xi or 0, lambda_2, ..., lambda_n}
/// where lambda_i are the positive eigenvalues of H.
struct RateBound {
  double x_factor = 1.0;
  double y_factor = 1.0;
  double product() const noexcept { return x_factor * y_factor; }
};

RateBound sda_rate_bound(const TransportProblem& problem, const std::optional<ShiftSpec>& shift, double gamma);

}  // namespace nare
