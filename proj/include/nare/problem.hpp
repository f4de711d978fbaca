#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "nare/linalg.hpp"

namespace nare {

/// Physical parameters of a transport-theory Riccati equation.
///
/// Nodes are stored in strictly descending order, so nodes[0] is the
/// largest angle cosine. Weights are paired index-by-index with nodes.
struct TransportParams {
  double alpha = 0.0;
  double c = 1.0;
  Vector weights;
  Vector nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  bool is_critical() const noexcept { return alpha == 0.0 && c == 1.0; }
};

/// Weights and nodes of a quadrature rule on [0, 1], nodes descending.
struct QuadratureRule {
  Vector weights;
  Vector nodes;
};

/// Composite 4-point Gauss-Legendre rule on n/4 equal subintervals of [0, 1].
/// Throws InvalidSize unless n is a positive multiple of 4.
QuadratureRule gauss_legendre_composite(std::size_t n);

enum class StructureTag { Original, SingleShift, DoubleShift };

/// Coefficient matrices of X C X - X D - A X + B = 0.
struct CoefficientQuadruple {
  DenseMatrix a;
  DenseMatrix b;
  DenseMatrix c;
  DenseMatrix d;
  StructureTag tag = StructureTag::Original;
  // Shift parameters when the quadruple came from a shift (eta, xi).
  double eta = 0.0;
  double xi = 0.0;

  std::size_t size() const noexcept { return a.rows(); }
};

struct TransportProblem {
  TransportParams params;
  Vector q;      // q_i = c_i / (2 omega_i)
  Vector e;      // ones
  Vector delta;  // diag of Delta
  Vector gamma;  // diag of Gamma
  CoefficientQuadruple quad;

  std::size_t size() const noexcept { return q.size(); }
  bool is_critical() const noexcept { return params.is_critical(); }
  double omega1() const noexcept { return params.nodes.front(); }
};

/// Eigenvectors of H for the zero eigenvalue in the critical case, plus the
/// normalising vectors r and s used by the shifts. Each 2n vector is kept as
/// its top and bottom halves.
struct CriticalEigenvectors {
  Vector v1, v2;  // right: v = [Gamma^-1 q; Delta^-1 e]
  Vector u1, u2;  // left:  u = [Gamma^-1 e; -Delta^-1 q]
  Vector r1, r2;  // r = [e; q]
  Vector s1, s2;  // s = [q; -e]
};

/// Validates the parameter invariants and builds the derived vectors and
/// the coefficient quadruple. Throws InvalidParams on bad input.
TransportProblem build_problem(TransportParams params);

/// Convenience: critical or non-critical problem on the composite rule.
TransportProblem build_quadrature_problem(std::size_t n, double alpha = 0.0, double c = 1.0);

/// M = [[D, -C], [-B, A]] for an arbitrary quadruple.
DenseMatrix assemble_m(const CoefficientQuadruple& quad);

/// (M, H) with H = J M and J = diag(I, -I).
std::pair<DenseMatrix, DenseMatrix> assemble_blocks(const TransportProblem& problem);

/// Throws NotCriticalCase unless (alpha, c) == (0, 1) exactly.
CriticalEigenvectors critical_eigenvectors(const TransportProblem& problem);

void require_critical(const TransportProblem& problem, const char* what);

}  // namespace nare
