#include "nare/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "nare/error.hpp"

namespace nare {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1] in closed form.
struct BaseRule {
  std::array<double, 4> nodes;
  std::array<double, 4> weights;
};

BaseRule four_point_rule() {
  const double inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
  const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
  return {{-outer, -inner, inner, outer}, {w_outer, w_inner, w_inner, w_outer}};
}

void validate(const TransportParams& p) {
  const std::size_t n = p.nodes.size();
  if (n == 0) throw NareError(ErrorKind::InvalidParams, "empty node set");
  if (p.weights.size() != n) throw NareError(ErrorKind::InvalidParams, "weights and nodes differ in length");
  if (!(p.alpha >= 0.0 && p.alpha < 1.0)) throw NareError(ErrorKind::InvalidParams, "alpha must lie in [0, 1)");
  if (!(p.c > 0.0 && p.c <= 1.0)) throw NareError(ErrorKind::InvalidParams, "c must lie in (0, 1]");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.weights[i] > 0.0)) throw NareError(ErrorKind::InvalidParams, "weights must be positive");
    if (!(p.nodes[i] > 0.0 && p.nodes[i] < 1.0)) throw NareError(ErrorKind::InvalidParams, "nodes must lie in (0, 1)");
    if (i > 0 && !(p.nodes[i] < p.nodes[i - 1])) {
      throw NareError(ErrorKind::InvalidParams, "nodes must be strictly descending");
    }
  }
  const double total = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw NareError(ErrorKind::InvalidParams, "weights sum to " + std::to_string(total) + ", expected 1");
  }
}

}  // namespace

QuadratureRule gauss_legendre_composite(std::size_t n) {
  if (n == 0 || n % 4 != 0) {
    throw NareError(ErrorKind::InvalidSize, "quadrature size must be a positive multiple of 4, got " + std::to_string(n));
  }
  const BaseRule base = four_point_rule();
  const std::size_t panels = n / 4;
  const double h = 1.0 / static_cast<double>(panels);

  // Walk panels from the right end so nodes come out descending.
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (std::size_t p = panels; p-- > 0;) {
    const double left = static_cast<double>(p) * h;
    for (std::size_t k = 4; k-- > 0;) {
      rule.nodes.push_back(left + 0.5 * h * (base.nodes[k] + 1.0));
      rule.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return rule;
}

TransportProblem build_problem(TransportParams params) {
  validate(params);
  const std::size_t n = params.size();

  TransportProblem prob;
  prob.q.resize(n);
  prob.e.assign(n, 1.0);
  prob.delta.resize(n);
  prob.gamma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = params.nodes[i];
    prob.q[i] = params.weights[i] / (2.0 * w);
    prob.delta[i] = 1.0 / (params.c * w * (1.0 + params.alpha));
    prob.gamma[i] = 1.0 / (params.c * w * (1.0 - params.alpha));
  }

  auto& quad = prob.quad;
  quad.a = DenseMatrix::diagonal(prob.delta) - DenseMatrix::outer(prob.e, prob.q);
  quad.b = DenseMatrix::outer(prob.e, prob.e);
  quad.c = DenseMatrix::outer(prob.q, prob.q);
  quad.d = DenseMatrix::diagonal(prob.gamma) - DenseMatrix::outer(prob.q, prob.e);
  quad.tag = StructureTag::Original;
  prob.params = std::move(params);
  return prob;
}

TransportProblem build_quadrature_problem(std::size_t n, double alpha, double c) {
  QuadratureRule rule = gauss_legendre_composite(n);
  return build_problem({alpha, c, std::move(rule.weights), std::move(rule.nodes)});
}

DenseMatrix assemble_m(const CoefficientQuadruple& quad) {
  const std::size_t n = quad.size();
  DenseMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = quad.d(i, j);
      m(i, n + j) = -quad.c(i, j);
      m(n + i, j) = -quad.b(i, j);
      m(n + i, n + j) = quad.a(i, j);
    }
  }
  return m;
}

std::pair<DenseMatrix, DenseMatrix> assemble_blocks(const TransportProblem& problem) {
  DenseMatrix m = assemble_m(problem.quad);
  DenseMatrix h = m;
  const std::size_t n = problem.size();
  for (std::size_t i = n; i < 2 * n; ++i)
    for (double& x : h.row(i)) x = -x;
  return {std::move(m), std::move(h)};
}

void require_critical(const TransportProblem& problem, const char* what) {
  if (!problem.is_critical()) {
    throw NareError(ErrorKind::NotCriticalCase,
                    std::string(what) + " requires (alpha, c) = (0, 1); got (" + std::to_string(problem.params.alpha) +
                        ", " + std::to_string(problem.params.c) + ")");
  }
}

CriticalEigenvectors critical_eigenvectors(const TransportProblem& problem) {
  require_critical(problem, "critical_eigenvectors");
  const std::size_t n = problem.size();
  CriticalEigenvectors ev;
  ev.v1.resize(n);
  ev.v2.resize(n);
  ev.u1.resize(n);
  ev.u2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ev.v1[i] = problem.q[i] / problem.gamma[i];
    ev.v2[i] = 1.0 / problem.delta[i];
    ev.u1[i] = 1.0 / problem.gamma[i];
    ev.u2[i] = -problem.q[i] / problem.delta[i];
  }
  ev.r1 = problem.e;
  ev.r2 = problem.q;
  ev.s1 = problem.q;
  ev.s2.assign(n, -1.0);
  return ev;
}

}  // namespace nare
