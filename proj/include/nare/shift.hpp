#pragma once

#include "nare/linalg.hpp"
#include "nare/problem.hpp"

namespace nare {

enum class ShiftMode { Single, Double };

/// Shift parameters together with the eigenvector data that defines the
/// rank corrections. `eta` relocates one zero eigenvalue of H to eta > 0,
/// `xi` relocates the other to xi < 0 (xi = 0 for a single shift).
struct ShiftSpec {
  double eta = 0.0;
  double xi = 0.0;
  ShiftMode mode = ShiftMode::Single;
  CriticalEigenvectors vectors;
};

/// Lower boundary of the admissible xi for a given eta: (-1 + eta w1) / w1.
double xi_lower_bound(double eta, double omega1) noexcept;

/// Checks the admissible region for the mode.
///
///  single: 0 < eta <= 1/w1, xi == 0
///  double: 0 < eta < 1/w1, (-1 + eta w1)/w1 <= xi < 0
///
/// With `relaxed` the closure is accepted (eta in [0, 1/w1], xi in
/// [(-1 + eta w1)/w1, 0]); the low-rank simple iteration uses this form.
/// Boundary comparisons carry a few ulps of slack so that the closed-form
/// default shifts land inside. Throws ShiftOutOfRegion naming the violated
/// inequality.
void validate_shift(double eta, double xi, ShiftMode mode, double omega1, bool relaxed = false);

/// Builds a ShiftSpec for the problem after validating (eta, xi).
ShiftSpec make_shift(const TransportProblem& problem, double eta, double xi, ShiftMode mode, bool relaxed = false);

/// (1/(2 w1), 0) for single, (1/(2 w1), -1/(2 w1)) for double.
ShiftSpec default_shift(const TransportProblem& problem, ShiftMode mode);

/// Dense shifted quadruple:
///   D' = D + eta v1 r1^T + xi s1 u1^T      C' = C - eta v1 r2^T - xi s1 u2^T
///   B' = B + eta v2 r1^T + xi s2 u1^T      A' = A - eta v2 r2^T - xi s2 u2^T
CoefficientQuadruple shifted_coefficients(const TransportProblem& problem, const ShiftSpec& shift);

/// Same construction with no region check, for probing the region boundary.
/// The tag is DoubleShift unless xi == 0.
CoefficientQuadruple shifted_coefficients_unchecked(const TransportProblem& problem, double eta, double xi);

/// n x 2 factors with D' = Gamma - Q1 E1^T, C' = Q1 Q2^T, B' = E2 E1^T,
/// A' = Delta - E2 Q2^T.
struct LowRankFactors {
  DenseMatrix q1;
  DenseMatrix q2;
  DenseMatrix e1;
  DenseMatrix e2;
};

LowRankFactors low_rank_factors(const TransportProblem& problem, const ShiftSpec& shift);

}  // namespace nare
