#pragma once

#include <functional>
#include <optional>

#include "nare/linalg.hpp"
#include "nare/problem.hpp"
#include "nare/shift.hpp"
#include "nare/solution.hpp"

namespace nare {

/// t_ij = 1/(delta_i + d_j), P_ij = q_j t_ij, Qm_ij = q_j / (delta_j + d_i).
struct HadamardKernel {
  DenseMatrix t;
  DenseMatrix p;
  DenseMatrix qm;
};

HadamardKernel build_kernel(const TransportProblem& problem);

struct SiConfig {
  std::optional<double> tol;  // default: n^2 eps
  int max_iter = 10000;
  StopRule stop_rule = StopRule::Either;
};

struct SiState {
  Vector m;
  Vector n;
  int k = 0;
};

/// Shifted iterate in factored form: Z = T o (M N^T), M = [m1 m2], N = [n1 n2].
struct SiShiftState {
  DenseMatrix mk;  // n x 2
  DenseMatrix nk;  // n x 2
  DenseMatrix z;
  int k = 0;
};

using SiObserver = std::function<void(const SiState&)>;
using SiShiftObserver = std::function<void(const SiShiftState&)>;

/// m' = m o (P n) + e, n' = n o (Qm m) + e from m = n = 0; X = T o (m n^T).
/// Err is the larger relative update of m and n.
Solution si_solve(const TransportProblem& problem, const SiConfig& config = {}, const SiObserver& observer = {});

/// Low-rank shifted iteration from Z = 0:
///   m2 = Z q + e,             m1 = Z (I - eta Gamma^-1) q + (I + eta Delta^-1) e,
///   n1 = Z^T q + e,           n2 = -xi (Gamma^-1 e - Z^T Delta^-1 q),
///   Z' = T o (m1 n1^T + m2 n2^T).
/// The shift may lie on the closure of the admissible region, including
/// (0, 0). Err is the larger relative update of the factor matrices. Res in
/// the history is the original equation's; the stop rule tests the shifted
/// equation's residual.
Solution si_shifted_solve(const TransportProblem& problem, const ShiftSpec& shift, const SiConfig& config = {},
                          const SiShiftObserver& observer = {});

/// T o (M N^T) for n x 2 factors.
DenseMatrix mn_to_solution(const HadamardKernel& kernel, const DenseMatrix& m, const DenseMatrix& n);

}  // namespace nare
