#include "nare/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include "nare/error.hpp"
#include "nare/sda.hpp"
#include "nare/shift.hpp"
#include "nare/si.hpp"
#include "nare/spectra.hpp"

namespace nare::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitMaxIter = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMatrix:
    case ErrorKind::PoleHit:
    case ErrorKind::BracketFailure:
    case ErrorKind::Breakdown:
    case ErrorKind::InsufficientHistory:
      return kExitNumerical;
    default:
      return kExitInvalid;
  }
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_num(double v) { return std::isfinite(v) ? num17(v) : "null"; }

std::string sci2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) { return line.substr(0, line.find('#')); }

Vector parse_list(const std::string& text, const std::string& where) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  Vector out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw NareError(ErrorKind::InvalidInput, where + ": bad number '" + tok + "'");
    }
  }
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  const Vector v = parse_list(text, where);
  if (v.size() != 1) throw NareError(ErrorKind::InvalidInput, where + ": expected one number");
  return v.front();
}

void sort_descending(Vector& weights, Vector& nodes) {
  std::vector<std::size_t> idx(nodes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return nodes[a] > nodes[b]; });
  Vector w(idx.size()), x(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    w[i] = weights[idx[i]];
    x[i] = nodes[idx[i]];
  }
  weights = std::move(w);
  nodes = std::move(x);
}

bool is_shifted(SolverKind s) noexcept {
  return s == SolverKind::SdaSingle || s == SolverKind::SdaDouble || s == SolverKind::SiSingle ||
         s == SolverKind::SiDouble;
}

bool is_double(SolverKind s) noexcept { return s == SolverKind::SdaDouble || s == SolverKind::SiDouble; }

bool is_sda(SolverKind s) noexcept {
  return s == SolverKind::Sda || s == SolverKind::SdaSingle || s == SolverKind::SdaDouble;
}

ShiftSpec resolve_shift(const TransportProblem& problem, SolverKind solver, const SolveOptions& opt) {
  const ShiftMode mode = is_double(solver) ? ShiftMode::Double : ShiftMode::Single;
  ShiftSpec shift = default_shift(problem, mode);
  const double eta = opt.eta.value_or(shift.eta);
  const double xi = mode == ShiftMode::Single ? opt.xi.value_or(0.0) : opt.xi.value_or(shift.xi);
  // SI accepts the closure of the region, SDA needs the region proper.
  return make_shift(problem, eta, xi, mode, /*relaxed=*/!is_sda(solver));
}

}  // namespace

const char* to_string(SolverKind s) noexcept {
  switch (s) {
    case SolverKind::Sda:
      return "sda";
    case SolverKind::SdaSingle:
      return "sda-single";
    case SolverKind::SdaDouble:
      return "sda-double";
    case SolverKind::Si:
      return "si";
    case SolverKind::SiSingle:
      return "si-single";
    case SolverKind::SiDouble:
      return "si-double";
  }
  return "?";
}

SolverKind parse_solver(const std::string& name) {
  for (SolverKind s : all_solvers()) {
    if (name == to_string(s)) return s;
  }
  throw NareError(ErrorKind::InvalidInput, "unknown solver '" + name + "'");
}

const std::vector<SolverKind>& all_solvers() {
  static const std::vector<SolverKind> v{SolverKind::Sda, SolverKind::SdaSingle, SolverKind::SdaDouble,
                                         SolverKind::Si,  SolverKind::SiSingle,  SolverKind::SiDouble};
  return v;
}

TransportParams read_nodes_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NareError(ErrorKind::InvalidInput, "cannot open nodes file '" + path + "'");
  TransportParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const Vector v = parse_list(body, path + ":" + std::to_string(lineno));
    if (v.size() != 2) {
      throw NareError(ErrorKind::InvalidInput, path + ":" + std::to_string(lineno) + ": expected 'weight node'");
    }
    p.weights.push_back(v[0]);
    p.nodes.push_back(v[1]);
  }
  if (p.nodes.empty()) throw NareError(ErrorKind::InvalidInput, "nodes file '" + path + "' has no entries");
  sort_descending(p.weights, p.nodes);
  return p;
}

TransportProblem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NareError(ErrorKind::InvalidInput, "cannot open problem file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw NareError(ErrorKind::InvalidInput, path + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key != "alpha" && key != "c" && key != "n" && key != "nodes" && key != "weights") {
      throw NareError(ErrorKind::InvalidInput, path + ": unknown key '" + key + "'");
    }
    kv[key] = trim(body.substr(eq + 1));
  }
  const double alpha = kv.count("alpha") ? parse_number(kv["alpha"], path + ": alpha") : 0.0;
  const double c = kv.count("c") ? parse_number(kv["c"], path + ": c") : 1.0;
  const bool explicit_nodes = kv.count("nodes") || kv.count("weights");
  if (kv.count("n") && explicit_nodes) {
    throw NareError(ErrorKind::InvalidInput, path + ": give either n or nodes/weights");
  }
  if (explicit_nodes) {
    TransportParams p;
    p.alpha = alpha;
    p.c = c;
    p.nodes = parse_list(kv["nodes"], path + ": nodes");
    p.weights = parse_list(kv["weights"], path + ": weights");
    if (p.nodes.size() != p.weights.size() || p.nodes.empty()) {
      throw NareError(ErrorKind::InvalidInput, path + ": nodes and weights differ in length");
    }
    sort_descending(p.weights, p.nodes);
    return build_problem(std::move(p));
  }
  if (!kv.count("n")) throw NareError(ErrorKind::InvalidInput, path + ": missing n or nodes/weights");
  const double n = parse_number(kv["n"], path + ": n");
  if (n < 1 || n != std::floor(n)) throw NareError(ErrorKind::InvalidSize, path + ": n must be a positive integer");
  return build_quadrature_problem(static_cast<std::size_t>(n), alpha, c);
}

RunResult run_solver(const TransportProblem& problem, SolverKind solver, const SolveOptions& options) {
  RunResult r;
  r.n = problem.size();
  r.solver = solver;
  try {
    std::optional<ShiftSpec> shift;
    if (is_shifted(solver)) {
      shift = resolve_shift(problem, solver, options);
      r.eta = shift->eta;
      r.xi = shift->xi;
    }

    const auto start = std::chrono::steady_clock::now();
    if (is_sda(solver)) {
      SdaConfig cfg;
      cfg.gamma = options.gamma;
      cfg.tol = options.tol;
      cfg.max_iter = options.max_iter.value_or(100);
      r.solution = sda_solve(problem, shift, cfg);
      r.gamma = r.solution.gamma;
    } else {
      SiConfig cfg;
      cfg.tol = options.tol;
      cfg.max_iter = options.max_iter.value_or(10000);
      r.solution = shift ? si_shifted_solve(problem, *shift, cfg) : si_solve(problem, cfg);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const Solution& s = r.solution;
    r.iterations = s.iterations;
    r.res = s.res_final();
    r.err_final = s.err_final();
    r.converged = s.converged;
    r.exit_code = s.converged ? kExitOk : kExitMaxIter;

    if (problem.is_critical()) {
      const DenseMatrix* y = (solver == SolverKind::Sda && s.y) ? &*s.y : nullptr;
      r.gaps = solution_identities(problem, s.x, y);
      if (shift) r.shift_gap = shift_equivalence_gap(problem, *shift, s.x);
    }
    try {
      r.estimate = convergence_order(s.err_history, 8);
    } catch (const NareError&) {
    }
  } catch (const NareError& e) {
    r.failure = e.what();
    r.exit_code = exit_code_for(e.kind());
  }
  return r;
}

std::string csv_header() { return "n,solver,eta,xi,gamma,iterations,res,err_final,wall_ms,converged"; }

std::string csv_row(const RunResult& r) {
  std::ostringstream os;
  os << r.n << ',' << to_string(r.solver) << ',' << num17(r.eta) << ',' << num17(r.xi) << ',' << num17(r.gamma)
     << ',' << r.iterations << ',' << num17(r.res) << ',' << num17(r.err_final) << ',' << num17(r.wall_ms) << ','
     << (r.converged ? "true" : "false");
  return os.str();
}

std::string json_object(const RunResult& r) {
  std::ostringstream os;
  os << "{\"n\":" << r.n << ",\"solver\":\"" << to_string(r.solver) << "\",\"eta\":" << json_num(r.eta)
     << ",\"xi\":" << json_num(r.xi) << ",\"gamma\":" << json_num(r.gamma) << ",\"iterations\":" << r.iterations
     << ",\"res\":" << json_num(r.res) << ",\"err_final\":" << json_num(r.err_final)
     << ",\"wall_ms\":" << json_num(r.wall_ms) << ",\"converged\":" << (r.converged ? "true" : "false");
  if (r.gaps) {
    os << ",\"xv1_minus_v2\":" << json_num(r.gaps->xv1_minus_v2) << ",\"u2x_plus_u1\":" << json_num(r.gaps->u2x_plus_u1)
       << ",\"symmetry_gap\":" << json_num(r.gaps->symmetry_gap);
    if (r.gaps->u1y_plus_u2) os << ",\"u1y_plus_u2\":" << json_num(*r.gaps->u1y_plus_u2);
  }
  if (r.shift_gap) os << ",\"shift_equivalence_gap\":" << json_num(*r.shift_gap);
  if (r.estimate) os << ",\"rate\":" << json_num(r.estimate->rate) << ",\"order\":" << json_num(r.estimate->order);
  if (r.failure) os << ",\"error\":\"" << json_escape(*r.failure) << '"';
  os << '}';
  return os.str();
}

std::string format_run_table(const RunResult& r) {
  std::ostringstream os;
  os << "solver      " << to_string(r.solver) << "\nn           " << r.n << '\n';
  if (r.failure) {
    os << "error       " << *r.failure << '\n';
    return os.str();
  }
  if (is_shifted(r.solver)) os << "eta         " << sci2(r.eta) << "\nxi          " << sci2(r.xi) << '\n';
  if (is_sda(r.solver)) os << "gamma       " << sci2(r.gamma) << '\n';
  os << "iterations  " << r.iterations << (r.converged ? "" : " (cap reached)") << '\n'
     << "res         " << sci2(r.res) << "\nerr         " << sci2(r.err_final) << '\n'
     << "wall_ms     " << sci2(r.wall_ms) << '\n';
  if (r.gaps) {
    os << "Xv1-v2      " << sci2(r.gaps->xv1_minus_v2) << "\nu2'X+u1'    " << sci2(r.gaps->u2x_plus_u1)
       << "\nX-X'        " << sci2(r.gaps->symmetry_gap) << '\n';
    if (r.gaps->u1y_plus_u2) os << "u1'Y+u2'    " << sci2(*r.gaps->u1y_plus_u2) << '\n';
  }
  if (r.shift_gap) os << "R'(X)-R(X)  " << sci2(*r.shift_gap) << '\n';
  if (r.estimate) os << "rate        " << sci2(r.estimate->rate) << "\norder       " << sci2(r.estimate->order) << '\n';
  return os.str();
}

std::vector<RunResult> table51(const std::vector<std::size_t>& sizes, const SolveOptions& options) {
  std::vector<std::future<RunResult>> jobs;
  for (std::size_t n : sizes) {
    for (SolverKind s : all_solvers()) {
      jobs.push_back(std::async(std::launch::async, [n, s, &options] {
        RunResult r;
        try {
          const TransportProblem problem = build_quadrature_problem(n);
          SolveOptions opt;
          opt.tol = options.tol;
          if (!is_sda(s)) opt.max_iter = options.max_iter;
          return run_solver(problem, s, opt);
        } catch (const NareError& e) {
          r.n = n;
          r.solver = s;
          r.failure = e.what();
          r.exit_code = exit_code_for(e.kind());
        }
        return r;
      }));
    }
  }
  std::vector<RunResult> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::string format_table51(const std::vector<RunResult>& results) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-6s", "n");
  os << buf;
  for (SolverKind s : all_solvers()) {
    std::snprintf(buf, sizeof buf, "%-18s", to_string(s));
    os << buf;
  }
  os << '\n';
  std::size_t current = 0;
  bool open = false;
  for (const RunResult& r : results) {
    if (!open || r.n != current) {
      if (open) os << '\n';
      std::snprintf(buf, sizeof buf, "%-6zu", r.n);
      os << buf;
      current = r.n;
      open = true;
    }
    std::string cell;
    if (r.failure) {
      cell = "*";
    } else if (!r.converged) {
      cell = "*(>" + std::to_string(r.iterations) + ")";
    } else {
      cell = sci2(r.res) + "(" + std::to_string(r.iterations) + ")";
    }
    std::snprintf(buf, sizeof buf, "%-18s", cell.c_str());
    os << buf;
  }
  if (open) os << '\n';
  return os.str();
}

namespace {

struct SourceOptions {
  std::size_t n = 32;
  double alpha = 0.0;
  double c = 1.0;
  std::string nodes_file;
  std::string problem_file;
};

struct CommonOptions {
  std::string eta;
  std::string xi;
  std::optional<double> gamma;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::string format = "table";
  std::string out;
};

void add_source_options(CLI::App* app, SourceOptions& s) {
  app->add_option("--n", s.n, "quadrature size (multiple of 4)");
  app->add_option("--alpha", s.alpha, "alpha in [0, 1)");
  app->add_option("--c", s.c, "c in (0, 1]");
  auto* nodes = app->add_option("--nodes", s.nodes_file, "file of 'weight node' pairs");
  app->add_option("--problem", s.problem_file, "key = value problem file")->excludes(nodes);
}

void add_format_options(CLI::App* app, CommonOptions& c) {
  app->add_option("--format", c.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app->add_option("--out", c.out, "write output to this file");
}

TransportProblem make_problem(const SourceOptions& s) {
  if (!s.problem_file.empty()) return read_problem_file(s.problem_file);
  if (!s.nodes_file.empty()) {
    TransportParams p = read_nodes_file(s.nodes_file);
    p.alpha = s.alpha;
    p.c = s.c;
    return build_problem(std::move(p));
  }
  return build_quadrature_problem(s.n, s.alpha, s.c);
}

std::optional<double> auto_or_number(const std::string& text, const char* name) {
  if (text.empty() || text == "auto") return std::nullopt;
  return parse_number(text, name);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw NareError(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  f << text;
}

int cmd_solve(const SourceOptions& src, const CommonOptions& opt, const std::string& solver_name, std::ostream& out,
              std::ostream& err) {
  const SolverKind solver = parse_solver(solver_name);
  const TransportProblem problem = make_problem(src);
  SolveOptions so;
  so.eta = auto_or_number(opt.eta, "--eta");
  so.xi = auto_or_number(opt.xi, "--xi");
  so.gamma = opt.gamma;
  so.tol = opt.tol;
  so.max_iter = opt.max_iter;
  if (!is_shifted(solver) && (so.eta || so.xi)) {
    throw NareError(ErrorKind::InvalidInput, "--eta/--xi need a shifted solver");
  }
  if (!is_sda(solver) && so.gamma) throw NareError(ErrorKind::InvalidInput, "--gamma applies to SDA solvers only");
  if (is_shifted(solver) && !problem.is_critical()) {
    throw NareError(ErrorKind::NotCriticalCase, std::string(to_string(solver)) + " requires (alpha, c) = (0, 1)");
  }

  const RunResult r = run_solver(problem, solver, so);
  if (r.failure) err << "error: " << *r.failure << '\n';
  std::string text;
  if (opt.format == "csv") {
    text = csv_header() + "\n" + csv_row(r) + "\n";
  } else if (opt.format == "json") {
    text = json_object(r) + "\n";
  } else {
    text = format_run_table(r);
  }
  emit(text, opt.out, out);
  if (r.exit_code == kExitMaxIter) err << "warning: iteration cap reached\n";
  return r.exit_code;
}

int cmd_table51(const std::vector<std::size_t>& sizes, const CommonOptions& opt, const std::string& csv_path,
                std::ostream& out) {
  SolveOptions so;
  so.tol = opt.tol;
  so.max_iter = opt.max_iter;
  const auto results = table51(sizes, so);

  std::string csv = csv_header() + "\n";
  for (const auto& r : results) csv += csv_row(r) + "\n";
  if (!csv_path.empty()) emit(csv, csv_path, out);

  std::string text;
  if (opt.format == "csv") {
    text = csv;
  } else if (opt.format == "json") {
    text = "[";
    for (std::size_t i = 0; i < results.size(); ++i) text += (i ? ",\n " : "") + json_object(results[i]);
    text += "]\n";
  } else {
    text = format_table51(results);
  }
  emit(text, opt.out, out);
  for (const auto& r : results) {
    if (r.failure) return kExitNumerical;
  }
  return kExitOk;
}

struct SpectrumRow {
  std::string matrix;
  std::string kind;
  double value;
  double lo;
  double hi;
  double residual;
};

int cmd_spectrum(const SourceOptions& src, const CommonOptions& opt, std::ostream& out) {
  const TransportProblem problem = make_problem(src);
  require_critical(problem, "spectrum");
  const bool shifted = !opt.eta.empty() || !opt.xi.empty();

  std::vector<SpectrumRow> rows;
  const SpectrumReport m = eigenvalues_m(problem);
  rows.push_back({"M", "zero", 0.0, 0.0, 0.0, 0.0});
  // Interlace the poles with the interior roots.
  const auto& nodes = problem.params.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rows.push_back({"M", "pole", 1.0 / nodes[i], 1.0 / nodes[i], 1.0 / nodes[i], 0.0});
    if (i < m.free_roots.size()) {
      const auto& r = m.free_roots[i];
      rows.push_back({"M", "root", r.value, r.bracket.lo, r.bracket.hi, r.residual});
    }
  }

  bool boundary = false;
  if (shifted) {
    ShiftSpec shift = default_shift(problem, ShiftMode::Double);
    const double eta = auto_or_number(opt.eta, "--eta").value_or(shift.eta);
    const double xi = auto_or_number(opt.xi, "--xi").value_or(shift.xi);
    shift = make_shift(problem, eta, xi, ShiftMode::Double);
    const SpectrumReport s = eigenvalues_m_shifted(problem, shift);
    boundary = s.on_region_boundary;
    for (const auto& r : s.free_roots) {
      rows.push_back({"M_shifted", r.tangent ? "tangent" : "root", r.value, r.bracket.lo, r.bracket.hi, r.residual});
    }
  }

  std::ostringstream os;
  if (opt.format == "csv") {
    os << "matrix,index,kind,value,lo,hi,residual\n";
    int idx = 0;
    std::string last;
    for (const auto& r : rows) {
      if (r.matrix != last) idx = 0;
      last = r.matrix;
      os << r.matrix << ',' << idx++ << ',' << r.kind << ',' << num17(r.value) << ',' << num17(r.lo) << ','
         << num17(r.hi) << ',' << num17(r.residual) << '\n';
    }
  } else if (opt.format == "json") {
    os << '[';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << (i ? ",\n " : "") << "{\"matrix\":\"" << r.matrix << "\",\"kind\":\"" << r.kind
         << "\",\"value\":" << json_num(r.value) << ",\"lo\":" << json_num(r.lo) << ",\"hi\":" << json_num(r.hi)
         << ",\"residual\":" << json_num(r.residual) << '}';
    }
    os << "]\n";
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %-8s %-24s %-24s %-24s %s\n", "matrix", "kind", "value", "lo", "hi",
                  "residual");
    os << buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%-10s %-8s %-24.17g %-24.17g %-24.17g %.2e\n", r.matrix.c_str(), r.kind.c_str(),
                    r.value, r.lo, r.hi, r.residual);
      os << buf;
    }
    if (boundary) os << "shift lies on the lower xi boundary of the admissible region\n";
  }
  emit(os.str(), opt.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // Bare flags default to the `solve` subcommand.
  std::vector<const char*> args(argv, argv + argc);
  if (argc >= 2) {
    const std::string first = argv[1];
    if (first != "solve" && first != "table51" && first != "spectrum" && first != "-h" && first != "--help") {
      args.insert(args.begin() + 1, "solve");
    }
  }

  CLI::App app{"Riccati equation solvers for transport theory"};
  app.require_subcommand(1);

  SourceOptions src;
  CommonOptions opt;
  std::string solver_name = "sda";
  std::vector<std::size_t> sizes{32, 64, 128, 256};
  std::string csv_path;

  auto* solve = app.add_subcommand("solve", "solve one problem");
  add_source_options(solve, src);
  solve->add_option("--solver", solver_name, "sda, sda-single, sda-double, si, si-single, si-double");
  solve->add_option("--eta", opt.eta, "shift eta or 'auto'");
  solve->add_option("--xi", opt.xi, "shift xi or 'auto'");
  solve->add_option("--gamma", opt.gamma, "SDA gamma (default: max diagonal)");
  solve->add_option("--tol", opt.tol, "stopping tolerance (default: n^2 eps)");
  solve->add_option("--max-iter", opt.max_iter, "iteration cap");
  add_format_options(solve, opt);

  auto* table = app.add_subcommand("table51", "iteration/residual table for the six solvers");
  table->add_option("--sizes", sizes, "problem sizes")->delimiter(',');
  table->add_option("--tol", opt.tol, "stopping tolerance (default: n^2 eps)");
  table->add_option("--max-iter", opt.max_iter, "SI iteration cap (default 10000)");
  table->add_option("--csv", csv_path, "also write the CSV table here");
  add_format_options(table, opt);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of M and, with a shift, of the shifted M");
  add_source_options(spectrum, src);
  spectrum->add_option("--eta", opt.eta, "shift eta or 'auto'");
  spectrum->add_option("--xi", opt.xi, "shift xi or 'auto'");
  add_format_options(spectrum, opt);

  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (solve->parsed()) return cmd_solve(src, opt, solver_name, out, err);
    if (table->parsed()) return cmd_table51(sizes, opt, csv_path, out);
    return cmd_spectrum(src, opt, out);
  } catch (const NareError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace nare::cli
