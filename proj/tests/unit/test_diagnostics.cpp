#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/helpers.hpp"
#include "nare/diagnostics.hpp"
#include "nare/error.hpp"
#include "nare/sda.hpp"

using namespace nare;

namespace {

TransportProblem scalar_problem() { return build_problem({0.0, 1.0, {1.0}, {0.5}}); }

}  // namespace

TEST(NormalizedResidual, ExactScalarSolution) {
  EXPECT_EQ(normalized_residual(scalar_problem(), DenseMatrix{{1.0}}), 0.0);
}

TEST(NormalizedResidual, ZeroIterateIsOne) {
  for (std::size_t n : {4u, 32u}) EXPECT_DOUBLE_EQ(normalized_residual(build_quadrature_problem(n), DenseMatrix(n, n)), 1.0);
}

TEST(NormalizedResidual, NumeratorMatchesRiccatiOperator) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 * (1 + trial % 4);
    const double alpha = trial % 3 == 0 ? 0.0 : 0.9 * u(rng);
    const double c = trial % 3 == 0 ? 1.0 : 0.1 + 0.9 * u(rng);
    const auto p = build_quadrature_problem(n, alpha, c);
    DenseMatrix x(n, n);
    for (double& v : x.data()) v = u(rng);
    // Undo the normalisation to recover the numerator.
    const double nx = inf_norm(x);
    const double ng = inf_norm(std::span<const double>(p.gamma));
    const double nd = inf_norm(std::span<const double>(p.delta));
    const double nq = inf_norm(std::span<const double>(p.q));
    double nqt = 0;
    for (double v : p.q) nqt += v;
    const double den = nx * ng + nx * nd + (nx * nq + 1) * (nqt * nx + n);
    const double direct = inf_norm(riccati_residual(p.quad, x));
    EXPECT_NEAR(normalized_residual(p, x) * den, direct, 1e-12 * direct);
  }
}

TEST(NormalizedResidual, ShiftedNumeratorMatchesDenseShiftedOperator) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto p = build_quadrature_problem(n);
    for (ShiftMode mode : {ShiftMode::Single, ShiftMode::Double}) {
      const ShiftSpec shift = default_shift(p, mode);
      DenseMatrix x(n, n);
      for (double& v : x.data()) v = u(rng);
      const double ratio = normalized_residual(p, shift, x) / normalized_residual(p, x);
      const double dense = inf_norm(riccati_residual(shifted_coefficients(p, shift), x)) /
                           inf_norm(riccati_residual(p.quad, x));
      EXPECT_NEAR(ratio, dense, 1e-12 * dense) << n;
    }
  }
}

TEST(NormalizedResidual, ShiftedResidualIsLinearInTheError) {
  const auto p = scalar_problem();
  const ShiftSpec shift = default_shift(p, ShiftMode::Single);
  for (double h : {1e-4, 1e-6}) {
    const DenseMatrix x{{1.0 - h}};
    EXPECT_NEAR(normalized_residual(p, shift, x) / h, normalized_residual(p, shift, DenseMatrix{{1.0 - 1e-5}}) / 1e-5,
                1e-3);
    EXPECT_LT(normalized_residual(p, x), h * h);
  }
}

TEST(RelativeUpdateError, Cases) {
  const DenseMatrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(relative_update_error(a, a), 0.0);
  EXPECT_EQ(relative_update_error(DenseMatrix{{0}}, DenseMatrix{{1}}), 1.0);
  EXPECT_TRUE(std::isinf(relative_update_error(DenseMatrix{{1}}, DenseMatrix{{0}})));
  EXPECT_EQ(relative_update_error(DenseMatrix{{0}}, DenseMatrix{{0}}), 0.0);
  const Vector v{1, 2}, w{1, 4};
  EXPECT_DOUBLE_EQ(relative_update_error(v, w), 0.5);
}

TEST(SolutionIdentities, Scalar) {
  const auto g = solution_identities(scalar_problem(), DenseMatrix{{1.0}});
  EXPECT_EQ(g.xv1_minus_v2, 0.0);
  EXPECT_EQ(g.u2x_plus_u1, 0.0);
  EXPECT_EQ(g.symmetry_gap, 0.0);
}

TEST(SolutionIdentities, ZeroHasPower) {
  const auto g = solution_identities(build_quadrature_problem(8), DenseMatrix(8, 8));
  EXPECT_DOUBLE_EQ(g.xv1_minus_v2, 1.0);
  EXPECT_DOUBLE_EQ(g.u2x_plus_u1, 1.0);
}

TEST(SolutionIdentities, ConvergedSolution) {
  const auto p = build_quadrature_problem(32);
  SdaConfig cfg;
  cfg.tol = 1e-14;
  const Solution s = sda_solve(p, default_shift(p, ShiftMode::Double), cfg);
  const auto g = solution_identities(p, s.x);
  EXPECT_LE(g.xv1_minus_v2, 1e-8);
  EXPECT_LE(g.u2x_plus_u1, 1e-8);
  EXPECT_LE(g.symmetry_gap, 1e-8);
  EXPECT_THROW(solution_identities(build_quadrature_problem(8, 0.5, 0.5), DenseMatrix(8, 8)), NareError);
}

TEST(SolutionIdentities, DualSolutionFromUnshiftedRun) {
  const auto p = build_quadrature_problem(16);
  SdaConfig cfg;
  cfg.stop_rule = StopRule::Error;
  cfg.tol = 1e-300;
  cfg.max_iter = 60;
  const Solution s = sda_solve(p, std::nullopt, cfg);
  const auto g = solution_identities(p, s.x, &*s.y);
  ASSERT_TRUE(g.u1y_plus_u2);
  EXPECT_LE(*g.u1y_plus_u2, 1e-6);
}

TEST(CertifyMMatrix, Cases) {
  EXPECT_EQ(certify_m_matrix(DenseMatrix::identity(2)), MatrixVerdict::NonsingularM);
  EXPECT_EQ(certify_m_matrix(DenseMatrix{{1, -2}, {-2, 1}}), MatrixVerdict::SingularOrNotM);
  EXPECT_EQ(certify_m_matrix(DenseMatrix{{1, 1}, {0, 1}}), MatrixVerdict::ZPatternViolation);
  EXPECT_EQ(certify_m_matrix(DenseMatrix{{1, -1}, {-1, 1}}), MatrixVerdict::SingularOrNotM);
}

TEST(CertifyMMatrix, ShiftedMatrixAtDefault) {
  const auto p = build_quadrature_problem(32);
  const auto q = shifted_coefficients(p, default_shift(p, ShiftMode::Double));
  EXPECT_EQ(certify_m_matrix(assemble_m(q)), MatrixVerdict::NonsingularM);
}

TEST(CertifyMMatrix, ClosedLoopMatrices) {
  const auto p = build_quadrature_problem(16);
  const ShiftSpec shift = default_shift(p, ShiftMode::Single);
  const Solution s = sda_solve(p, shift);
  // D - C X is singular at criticality; the shifted one is not.
  EXPECT_EQ(certify_m_matrix(p.quad.d - p.quad.c * s.x), MatrixVerdict::SingularOrNotM);
  const auto q = shifted_coefficients(p, shift);
  EXPECT_EQ(certify_m_matrix(q.d - q.c * s.x), MatrixVerdict::NonsingularM);
}

TEST(ConvergenceOrder, Geometric) {
  std::vector<double> h;
  for (int k = 0; k < 20; ++k) h.push_back(std::ldexp(1.0, -k));
  const auto e = convergence_order(h);
  EXPECT_NEAR(e.rate, 0.5, 1e-12);
  EXPECT_NEAR(e.order, 1.0, 1e-12);
}

TEST(ConvergenceOrder, Squaring) {
  std::vector<double> h;
  for (int k = 0; k < 6; ++k) h.push_back(std::pow(10.0, -std::pow(2.0, k)));
  EXPECT_NEAR(convergence_order(h).order, 2.0, 1e-9);
}

TEST(ConvergenceOrder, UsesTrailingWindow) {
  std::vector<double> h{std::numeric_limits<double>::infinity(), 1.0, 0.9, 0.5, 0.25, 0.125, 0.0625};
  EXPECT_NEAR(convergence_order(h, 4).rate, 0.5, 1e-12);
}

TEST(ConvergenceOrder, InsufficientHistory) {
  try {
    convergence_order(std::vector<double>{1.0, 0.5, 0.0, 0.1});
    FAIL();
  } catch (const NareError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientHistory);
  }
}

TEST(ConvergenceOrder, UnshiftedSdaRateIsOneHalf) {
  const auto p = build_quadrature_problem(32);
  SdaConfig ref_cfg;
  ref_cfg.tol = 1e-14;
  const Solution ref = sda_solve(p, default_shift(p, ShiftMode::Double), ref_cfg);
  std::vector<double> errs;
  sda_solve(p, std::nullopt, {}, [&](const SdaState& s) { errs.push_back(inf_norm(s.h - ref.x)); });
  const auto e = convergence_order(std::span<const double>(errs).subspan(12, 8));
  EXPECT_NEAR(e.rate, 0.5, 0.1);
}
