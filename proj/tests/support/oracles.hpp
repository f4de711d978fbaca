// Reference computations used by the tests. Deliberately written without
// the library's own linear algebra so that they can catch its mistakes.
#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Sign of det(a) by Gaussian elimination with partial pivoting.
inline int det_sign(Rows a) {
  const std::size_t n = a.size();
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    if (a[k][k] < 0.0) sign = -sign;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return sign;
}

// det(a - lambda I) sign.
inline int char_sign(const Rows& a, double lambda) {
  Rows b = a;
  for (std::size_t i = 0; i < b.size(); ++i) b[i][i] -= lambda;
  return det_sign(std::move(b));
}

// Legendre P_4 and its derivative from the three-term recurrence.
inline std::pair<double, double> legendre4(double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 1; k < 4; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  const double dp = 4.0 * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

// Nodes and weights of the 4-point rule on [0, 1], ascending, found by
// scanning for sign changes and bisecting.
inline std::pair<std::vector<double>, std::vector<double>> gauss4_unit() {
  std::vector<double> nodes, weights;
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) {
    double lo = -1.0 + 2.0 * s / samples + 1e-9;
    double hi = -1.0 + 2.0 * (s + 1) / samples - 1e-9;
    double flo = legendre4(lo).first;
    if (flo * legendre4(hi).first > 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = legendre4(mid).first;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double x = 0.5 * (lo + hi);
    const double dp = legendre4(x).second;
    nodes.push_back(0.5 * (x + 1.0));
    weights.push_back(0.5 * 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return {nodes, weights};
}

// T o (M N^T) by a triple loop.
inline Rows hadamard_lowrank(const Rows& t, const Rows& m, const Rows& n) {
  const std::size_t dim = t.size();
  Rows z(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < m[i].size(); ++c) s += m[i][c] * n[j][c];
      z[i][j] = t[i][j] * s;
    }
  return z;
}

// Roots of a monic quadratic x^2 + b x + c (real roots assumed).
inline std::pair<double, double> quadratic_roots(double b, double c) {
  const double disc = std::max(0.0, b * b - 4.0 * c);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q, r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace oracle
