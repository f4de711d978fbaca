#pragma once

#include <optional>
#include <span>

#include "nare/linalg.hpp"
#include "nare/problem.hpp"
#include "nare/shift.hpp"

namespace nare {

/// Relative normalized residual
///   |X Gamma + Delta X - (Xq + e)(q^T X + e^T)| /
///   (|X||Gamma| + |X||Delta| + (|X||q| + |e|)(|q^T||X| + |e^T|))
/// with infinity norms throughout.
double normalized_residual(const TransportProblem& problem, const DenseMatrix& x);

/// Same normalization with the numerator taken from the shifted equation.
/// This is linear in the error near the critical solution, where the
/// unshifted residual is only quadratic; the shifted solvers stop on it.
double normalized_residual(const TransportProblem& problem, const ShiftSpec& shift, const DenseMatrix& x);

/// X C X - X D - A X + B for an arbitrary quadruple.
DenseMatrix riccati_residual(const CoefficientQuadruple& quad, const DenseMatrix& x);

/// |curr - prev| / |curr|; 0 when both vanish, +inf when only |curr| does.
double relative_update_error(const DenseMatrix& prev, const DenseMatrix& curr);
double relative_update_error(std::span<const double> prev, std::span<const double> curr);

struct IdentityGaps {
  double xv1_minus_v2 = 0.0;  // |X v1 - v2| / |v2|
  double u2x_plus_u1 = 0.0;   // |u2^T X + u1^T| / |u1|
  double symmetry_gap = 0.0;  // |X - X^T| / |X|
  std::optional<double> u1y_plus_u2;  // |u1^T Y + u2^T| / |u2|, when Y given
};

/// Throws NotCriticalCase off the critical case.
IdentityGaps solution_identities(const TransportProblem& problem, const DenseMatrix& x,
                                 const DenseMatrix* y = nullptr);

/// |R'(X) - R(X)| / (1 + |X|^2) where R' is the shifted Riccati operator.
double shift_equivalence_gap(const TransportProblem& problem, const ShiftSpec& shift, const DenseMatrix& x);

enum class MatrixVerdict { NonsingularM, SingularOrNotM, ZPatternViolation };

const char* to_string(MatrixVerdict v) noexcept;

/// Z-pattern check (off-diagonal entries up to 1e-14 |A| above zero count
/// as zero), then the inverse must be entrywise >= -1e-12 |A^-1|.
MatrixVerdict certify_m_matrix(const DenseMatrix& a);

/// True when every off-diagonal entry is <= 1e-14 |A|.
bool is_z_matrix(const DenseMatrix& a);

struct ConvergenceEstimate {
  double rate = 0.0;
  double order = 0.0;
};

/// Uses the trailing run of finite positive entries, truncated to the last
/// `window` entries when window > 0. rate: geometric mean of e_{k+1}/e_k;
/// order: least-squares slope of log e_{k+1} against log e_k.
/// Throws InsufficientHistory with fewer than 4 usable entries.
ConvergenceEstimate convergence_order(std::span<const double> history, std::size_t window = 0);

}  // namespace nare
