#include "nare/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "nare/error.hpp"

namespace nare {

namespace {

constexpr double kPoleTolerance = 1e-14;
constexpr double kWidthFactor = 1e-15;
constexpr int kMaxBisection = 200;
constexpr int kInitialSamples = 64;
constexpr int kMaxSamples = 4096;
constexpr double kTangencyTolerance = 1e-9;

void check_poles(const TransportProblem& problem, double lambda) {
  for (double w : problem.params.nodes) {
    if (std::abs(lambda - 1.0 / w) < kPoleTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "lambda = " << lambda << " coincides with pole 1/omega = " << 1.0 / w;
      throw NareError(ErrorKind::PoleHit, os.str());
    }
  }
}

[[noreturn]] void bracket_failure(const std::string& where, double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << where << ": no sign change in (" << lo << ", " << hi << ")";
  throw NareError(ErrorKind::BracketFailure, os.str());
}

double tolerance_width(const TransportProblem& problem) { return kWidthFactor / problem.params.nodes.back(); }

// Bisection on a sign function with sign(lo) != sign(hi).
template <typename SignFn>
Bracket bisect(SignFn&& sign_of, double lo, double hi, int sign_lo, double width) {
  for (int it = 0; it < kMaxBisection && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(mid);
    if (s == 0) return {mid, mid};
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

int sign_of(double x) noexcept { return (x > 0.0) - (x < 0.0); }

// sum_j c_j / (1/w_j - lambda)
double pole_sum(const TransportProblem& problem, double lambda) {
  const auto& p = problem.params;
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) s += p.weights[j] / (1.0 / p.nodes[j] - lambda);
  return s;
}

// 1 - sum_j c_j / (1 - w_j^2 lambda^2); zero at eigenvalues of H.
double h_secular(const TransportProblem& problem, double lambda) {
  const auto& p = problem.params;
  double s = 1.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double wl = p.nodes[j] * lambda;
    s -= p.weights[j] / (1.0 - wl * wl);
  }
  return s;
}

// Points just inside (lo, hi) used to confirm the endpoint signs.
std::pair<double, double> inner_points(double lo, double hi) {
  const double w = hi - lo;
  return {lo + 1e-9 * w, hi - 1e-9 * w};
}

}  // namespace

SignedLogValue SignedLogValue::from(double x) noexcept {
  if (x == 0.0) return {};
  return {x > 0.0 ? 1 : -1, std::log(std::abs(x))};
}

double SignedLogValue::value() const noexcept {
  if (sign == 0) return 0.0;
  return static_cast<double>(sign) * std::exp(log_magnitude);
}

SignedLogValue operator*(SignedLogValue a, SignedLogValue b) noexcept {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
}

std::vector<double> SpectrumReport::all_values() const {
  std::vector<double> v = fixed_roots;
  for (const auto& r : free_roots) v.push_back(r.value);
  std::sort(v.begin(), v.end());
  return v;
}

SignedLogValue secular_f(const TransportProblem& problem, double lambda) {
  require_critical(problem, "secular_f");
  check_poles(problem, lambda);
  // Product of squared pole factors is positive; only its log matters.
  SignedLogValue result = SignedLogValue::from(-lambda);
  if (result.sign == 0) return result;
  double log_sq = 0.0;
  for (double w : problem.params.nodes) log_sq += 2.0 * std::log(std::abs(1.0 / w - lambda));
  result = result * SignedLogValue{1, log_sq};
  return result * SignedLogValue::from(pole_sum(problem, lambda));
}

GValues g_functions(const TransportProblem& problem, double lambda) {
  require_critical(problem, "g_functions");
  check_poles(problem, lambda);
  const auto& p = problem.params;
  GValues g;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = p.nodes[i];
    const double ci = p.weights[i];
    const double a = 1.0 / w - lambda;
    g.g1 += ci / a;
    g.g2 += ci * w / a;
    g.g3 += ci / (w * a);
  }
  g.g1 *= lambda;
  return g;
}

double shifted_secular_g(const TransportProblem& problem, const ShiftSpec& shift, double lambda) {
  require_critical(problem, "shifted_secular_g");
  validate_shift(shift.eta, shift.xi, ShiftMode::Double, problem.omega1());
  const GValues g = g_functions(problem, lambda);
  return g.g1 + shift.eta * shift.xi * g.g2 * g.g3;
}

SpectrumReport eigenvalues_m(const TransportProblem& problem) {
  require_critical(problem, "eigenvalues_m");
  const auto& nodes = problem.params.nodes;
  const std::size_t n = nodes.size();
  const double width = tolerance_width(problem);

  SpectrumReport report;
  report.fixed_roots.push_back(0.0);
  for (double w : nodes) report.fixed_roots.push_back(1.0 / w);

  auto sign_f = [&](double x) { return secular_f(problem, x).sign; };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double lo = 1.0 / nodes[k];
    const double hi = 1.0 / nodes[k + 1];
    const auto [a, b] = inner_points(lo, hi);
    const int sa = sign_f(a);
    const int sb = sign_f(b);
    if (sa == 0 || sb == 0 || sa == sb) bracket_failure("eigenvalues_m", lo, hi);
    const Bracket br = bisect(sign_f, a, b, sa, width);
    LocatedRoot root;
    root.value = 0.5 * (br.lo + br.hi);
    root.bracket = br;
    root.residual = std::abs(g_functions(problem, root.value).g1);
    report.free_roots.push_back(root);
  }

  const auto values = report.all_values();
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) bracket_failure("eigenvalues_m ordering", values[i - 1], values[i]);
  }
  return report;
}

SpectrumReport eigenvalues_m_shifted(const TransportProblem& problem, const ShiftSpec& shift) {
  require_critical(problem, "eigenvalues_m_shifted");
  validate_shift(shift.eta, shift.xi, ShiftMode::Double, problem.omega1());
  const auto& nodes = problem.params.nodes;
  const std::size_t n = nodes.size();
  const double width = tolerance_width(problem);
  const double eta_xi = shift.eta * shift.xi;

  auto g_of = [&](double x) { return shifted_secular_g(problem, shift, x); };
  auto sign_g = [&](double x) { return sign_of(g_of(x)); };

  SpectrumReport report;
  const double lower = xi_lower_bound(shift.eta, problem.omega1());
  report.on_region_boundary = std::abs(shift.xi - lower) <= 8.0 * 0x1p-52 / problem.omega1();

  auto locate_pair = [&](double lo, double hi) {
    std::vector<double> xs;
    std::vector<double> gs;
    std::vector<std::size_t> changes;
    for (int m = kInitialSamples; m <= kMaxSamples; m *= 2) {
      xs.resize(m);
      gs.resize(m);
      for (int j = 0; j < m; ++j) {
        const double t = std::cos((2.0 * (m - 1 - j) + 1.0) * std::numbers::pi / (2.0 * m));
        xs[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
        gs[j] = g_of(xs[j]);
      }
      changes.clear();
      for (int j = 0; j + 1 < m; ++j) {
        if (sign_of(gs[j]) != sign_of(gs[j + 1])) changes.push_back(static_cast<std::size_t>(j));
      }
      if (changes.size() >= 2) break;
    }
    if (changes.size() > 2) bracket_failure("eigenvalues_m_shifted (extra sign changes)", lo, hi);

    auto refine = [&](std::size_t j) {
      const Bracket br = bisect(sign_g, xs[j], xs[j + 1], sign_of(gs[j]), width);
      LocatedRoot r;
      r.value = 0.5 * (br.lo + br.hi);
      r.bracket = br;
      r.residual = std::abs(g_of(r.value));
      return r;
    };

    if (changes.size() == 2) {
      report.free_roots.push_back(refine(changes[0]));
      report.free_roots.push_back(refine(changes[1]));
      return;
    }

    // No sign change: the pair may be (nearly) coincident. Maximise g
    // around the best sample by golden-section search.
    const auto best = static_cast<std::size_t>(std::max_element(gs.begin(), gs.end()) - gs.begin());
    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = g_of(c);
    double gd = g_of(d);
    for (int it = 0; it < 200 && b - a > width; ++it) {
      if (gc > gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - inv_phi * (b - a);
        gc = g_of(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + inv_phi * (b - a);
        gd = g_of(d);
      }
    }
    const double peak = 0.5 * (a + b);
    const double g_peak = g_of(peak);
    if (g_peak > 0.0) {
      const double left = xs[best == 0 ? 0 : best - 1];
      const double right = xs[std::min(best + 1, xs.size() - 1)];
      for (auto [x0, x1] : {std::pair{left, peak}, std::pair{peak, right}}) {
        const Bracket br = bisect(sign_g, x0, x1, sign_g(x0), width);
        LocatedRoot r;
        r.value = 0.5 * (br.lo + br.hi);
        r.bracket = br;
        r.residual = std::abs(g_of(r.value));
        report.free_roots.push_back(r);
      }
      return;
    }
    const GValues gv = g_functions(problem, peak);
    const double scale = std::abs(gv.g1) + std::abs(eta_xi * gv.g2 * gv.g3);
    if (std::abs(g_peak) > kTangencyTolerance * scale) bracket_failure("eigenvalues_m_shifted", lo, hi);
    LocatedRoot r;
    r.value = peak;
    r.bracket = {a, b};
    r.residual = std::abs(g_peak);
    r.tangent = true;
    report.free_roots.push_back(r);
    report.free_roots.push_back(r);
  };

  locate_pair(0.0, 1.0 / nodes[0]);
  for (std::size_t k = 0; k + 1 < n; ++k) locate_pair(1.0 / nodes[k], 1.0 / nodes[k + 1]);

  const auto& roots = report.free_roots;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (!(roots[i].value > 0.0)) bracket_failure("eigenvalues_m_shifted positivity", 0.0, roots[i].value);
    if (i > 0) {
      const bool same_pair = roots[i].tangent && roots[i - 1].tangent && i % 2 == 1;
      const bool ordered = same_pair ? roots[i].value >= roots[i - 1].value : roots[i].value > roots[i - 1].value;
      if (!ordered) bracket_failure("eigenvalues_m_shifted ordering", roots[i - 1].value, roots[i].value);
    }
  }
  return report;
}

std::vector<LocatedRoot> eigenvalues_h_positive(const TransportProblem& problem) {
  require_critical(problem, "eigenvalues_h_positive");
  const auto& nodes = problem.params.nodes;
  const double width = tolerance_width(problem);
  auto sign_h = [&](double x) { return sign_of(h_secular(problem, x)); };

  std::vector<LocatedRoot> roots;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double lo = 1.0 / nodes[k];
    const double hi = 1.0 / nodes[k + 1];
    const auto [a, b] = inner_points(lo, hi);
    const int sa = sign_h(a);
    const int sb = sign_h(b);
    if (sa == 0 || sb == 0 || sa == sb) bracket_failure("eigenvalues_h_positive", lo, hi);
    const Bracket br = bisect(sign_h, a, b, sa, width);
    LocatedRoot r;
    r.value = 0.5 * (br.lo + br.hi);
    r.bracket = br;
    r.residual = std::abs(h_secular(problem, r.value));
    roots.push_back(r);
  }
  return roots;
}

double cayley(double z, double gamma) {
  const double denom = z + gamma;
  if (std::abs(denom) <= kPoleTolerance * std::max(1.0, std::abs(gamma))) {
    throw NareError(ErrorKind::PoleHit, "Cayley transform evaluated at z = -gamma");
  }
  return (z - gamma) / denom;
}

RateBound sda_rate_bound(const TransportProblem& problem, const std::optional<ShiftSpec>& shift, double gamma) {
  require_critical(problem, "sda_rate_bound");
  if (!(gamma > 0.0)) throw NareError(ErrorKind::InvalidParams, "gamma must be positive");
  const auto lambdas = eigenvalues_h_positive(problem);

  double common = 0.0;
  for (const auto& r : lambdas) common = std::max(common, std::abs(cayley(r.value, gamma)));

  const double relocated_x = shift ? shift->eta : 0.0;
  const double relocated_y = shift ? -shift->xi : 0.0;
  RateBound bound;
  bound.x_factor = std::max(common, std::abs(cayley(relocated_x, gamma)));
  bound.y_factor = std::max(common, std::abs(cayley(relocated_y, gamma)));
  return bound;
}

}  // namespace nare
