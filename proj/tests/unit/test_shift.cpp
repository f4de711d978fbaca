#include <gtest/gtest.h>

#include <random>

#include "../support/helpers.hpp"
#include "nare/diagnostics.hpp"
#include "nare/error.hpp"
#include "nare/shift.hpp"

using namespace nare;

namespace {

TransportProblem scalar_problem() { return build_problem({0.0, 1.0, {1.0}, {0.5}}); }

bool in_region(double eta, double xi, ShiftMode mode, double w1, bool relaxed = false) {
  try {
    validate_shift(eta, xi, mode, w1, relaxed);
    return true;
  } catch (const NareError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShiftOutOfRegion);
    return false;
  }
}

DenseMatrix assembled(const CoefficientQuadruple& q) { return assemble_m(q); }

}  // namespace

TEST(ValidateShift, DefaultDoubleShiftSitsOnClosedBoundary) {
  const double w1 = build_quadrature_problem(32).omega1();
  EXPECT_TRUE(in_region(1 / (2 * w1), -1 / (2 * w1), ShiftMode::Double, w1));
}

TEST(ValidateShift, EtaUpperBoundIsClosedForSingleOpenForDouble) {
  const double w1 = 0.9306;
  EXPECT_TRUE(in_region(1 / w1, 0.0, ShiftMode::Single, w1));
  EXPECT_FALSE(in_region(1 / w1, -0.1, ShiftMode::Double, w1));
  EXPECT_FALSE(in_region(1.001 / w1, 0.0, ShiftMode::Single, w1));
}

TEST(ValidateShift, XiBelowLowerBound) {
  const double w1 = 0.9306;
  EXPECT_FALSE(in_region(0.5 / w1, -2 / w1, ShiftMode::Double, w1));
  EXPECT_FALSE(in_region(0.5 / w1, 0.0, ShiftMode::Double, w1));
  EXPECT_FALSE(in_region(0.5 / w1, 0.1, ShiftMode::Single, w1));
  EXPECT_FALSE(in_region(0.0, -0.1, ShiftMode::Double, w1));
}

TEST(ValidateShift, RelaxedAcceptsClosure) {
  const double w1 = 0.75;
  EXPECT_TRUE(in_region(0.0, 0.0, ShiftMode::Double, w1, true));
  EXPECT_TRUE(in_region(0.0, 0.0, ShiftMode::Single, w1, true));
  EXPECT_TRUE(in_region(1 / w1, 0.0, ShiftMode::Double, w1, true));
  EXPECT_TRUE(in_region(0.0, -1 / w1, ShiftMode::Double, w1, true));
  EXPECT_FALSE(in_region(0.0, -1.01 / w1, ShiftMode::Double, w1, true));
  EXPECT_FALSE(in_region(-0.01, 0.0, ShiftMode::Double, w1, true));
}

TEST(ValidateShift, MessageNamesInequality) {
  try {
    validate_shift(0.5, -5.0, ShiftMode::Double, 0.5);
    FAIL();
  } catch (const NareError& e) {
    EXPECT_NE(std::string(e.what()).find("<= xi"), std::string::npos) << e.what();
  }
}

TEST(DefaultShift, ScalarValues) {
  const auto p = scalar_problem();
  const ShiftSpec s = default_shift(p, ShiftMode::Single);
  EXPECT_DOUBLE_EQ(s.eta, 1.0);
  EXPECT_DOUBLE_EQ(s.xi, 0.0);
  const ShiftSpec d = default_shift(p, ShiftMode::Double);
  EXPECT_DOUBLE_EQ(d.eta, 1.0);
  EXPECT_DOUBLE_EQ(d.xi, -1.0);
  EXPECT_DOUBLE_EQ(d.eta * d.xi, -1.0 / (4 * 0.25));
  EXPECT_THROW(default_shift(build_quadrature_problem(4, 0.1, 1.0), ShiftMode::Single), NareError);
}

TEST(ShiftedCoefficients, ScalarSingleShift) {
  const auto p = scalar_problem();
  const auto q = shifted_coefficients(p, make_shift(p, 1.0, 0.0, ShiftMode::Single));
  EXPECT_DOUBLE_EQ(q.d(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(q.c(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(q.b(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(q.a(0, 0), 0.5);
  EXPECT_EQ(q.tag, StructureTag::SingleShift);
  const DenseMatrix m = assembled(q);
  // singular with trace 2: eigenvalues {0, 2}
  EXPECT_DOUBLE_EQ(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(m(0, 0) + m(1, 1), 2.0);
}

TEST(ShiftedCoefficients, ScalarDoubleShiftBoundaryZero) {
  const auto p = scalar_problem();
  const auto q = shifted_coefficients(p, make_shift(p, 1.0, -1.0, ShiftMode::Double));
  EXPECT_DOUBLE_EQ(q.d(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(q.c(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(q.b(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(q.a(0, 0), 1.0);
  EXPECT_EQ(q.tag, StructureTag::DoubleShift);
  EXPECT_EQ(certify_m_matrix(assembled(q)), MatrixVerdict::NonsingularM);
}

TEST(ShiftedCoefficients, RejectsOutsideRegionAndNonCritical) {
  const auto p = scalar_problem();
  ShiftSpec bad{5.0, 0.0, ShiftMode::Single, critical_eigenvectors(p)};
  EXPECT_THROW(shifted_coefficients(p, bad), NareError);
  EXPECT_THROW(make_shift(build_quadrature_problem(4, 0.0, 0.9), 0.5, 0.0, ShiftMode::Single), NareError);
}

TEST(LowRankFactors, ZeroShift) {
  const auto p = build_quadrature_problem(4);
  const auto f = low_rank_factors(p, make_shift(p, 0.0, 0.0, ShiftMode::Double, true));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(f.q1(i, 0), p.q[i]);
    EXPECT_EQ(f.q1(i, 1), p.q[i]);
    EXPECT_EQ(f.q2(i, 0), p.q[i]);
    EXPECT_EQ(f.q2(i, 1), 0.0);
    EXPECT_EQ(f.e1(i, 0), 1.0);
    EXPECT_EQ(f.e1(i, 1), 0.0);
    EXPECT_EQ(f.e2(i, 0), 1.0);
    EXPECT_EQ(f.e2(i, 1), 1.0);
  }
}

TEST(LowRankFactors, ScalarDoubleShift) {
  const auto p = scalar_problem();
  const ShiftSpec s = make_shift(p, 1.0, -1.0, ShiftMode::Double);
  const auto f = low_rank_factors(p, s);
  EXPECT_EQ(f.q1, (DenseMatrix{{0.5, 1.0}}));
  EXPECT_EQ(f.q2, (DenseMatrix{{1.0, -0.5}}));
  EXPECT_EQ(f.e1, (DenseMatrix{{1.0, 0.5}}));
  EXPECT_EQ(f.e2, (DenseMatrix{{1.5, 1.0}}));
}

TEST(LowRankFactors, ReconstructShiftedQuadruple) {
  const auto p = build_quadrature_problem(32);
  const double w1 = p.omega1();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DenseMatrix gamma = DenseMatrix::diagonal(p.gamma);
  const DenseMatrix delta = DenseMatrix::diagonal(p.delta);
  for (int trial = 0; trial < 10; ++trial) {
    const double eta = u(rng) / w1;
    const double xi = u(rng) * xi_lower_bound(eta, w1);
    const ShiftSpec s = make_shift(p, eta, xi, ShiftMode::Double, true);
    const auto f = low_rank_factors(p, s);
    const auto q = shifted_coefficients_unchecked(p, eta, xi);
    const double tol = 1e-13 * std::max(1.0, inf_norm(q.d));
    EXPECT_LE(max_abs_diff(gamma - f.q1 * f.e1.transpose(), q.d), tol);
    EXPECT_LE(max_abs_diff(f.q1 * f.q2.transpose(), q.c), 1e-13);
    EXPECT_LE(max_abs_diff(f.e2 * f.e1.transpose(), q.b), 1e-13);
    EXPECT_LE(max_abs_diff(delta - f.e2 * f.q2.transpose(), q.a), tol);
  }
}

TEST(ShiftedCoefficients, ZMatrixBoundaryIsSharp) {
  const auto p = build_quadrature_problem(16);
  const double w1 = p.omega1();
  EXPECT_TRUE(is_z_matrix(assemble_m(shifted_coefficients_unchecked(p, 1.0 / w1, 0.0))));
  EXPECT_FALSE(is_z_matrix(assemble_m(shifted_coefficients_unchecked(p, 1.0001 / w1, 0.0))));
  const double eta = 1.0 / (2.0 * w1);
  const double lb = xi_lower_bound(eta, w1);
  EXPECT_TRUE(is_z_matrix(assemble_m(shifted_coefficients_unchecked(p, eta, lb))));
  EXPECT_FALSE(is_z_matrix(assemble_m(shifted_coefficients_unchecked(p, eta, 1.01 * lb))));
}

TEST(ShiftedCoefficients, SingleShiftRelocatesNullVector) {
  const auto p = build_quadrature_problem(16);
  const double eta = 0.7 / p.omega1();
  const auto q = shifted_coefficients(p, make_shift(p, eta, 0.0, ShiftMode::Single));
  DenseMatrix h = assemble_m(q);
  for (std::size_t i = 16; i < 32; ++i)
    for (double& x : h.row(i)) x = -x;
  const auto ev = critical_eigenvectors(p);
  Vector v(ev.v1);
  v.insert(v.end(), ev.v2.begin(), ev.v2.end());
  const Vector hv = matvec(h, v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(hv[i], eta * v[i], 1e-12 * inf_norm(h) * inf_norm(v));
}
