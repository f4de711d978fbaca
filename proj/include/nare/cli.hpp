#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nare/diagnostics.hpp"
#include "nare/problem.hpp"
#include "nare/solution.hpp"

namespace nare::cli {

enum class SolverKind { Sda, SdaSingle, SdaDouble, Si, SiSingle, SiDouble };

const char* to_string(SolverKind s) noexcept;
/// Throws InvalidInput on an unknown name.
SolverKind parse_solver(const std::string& name);
const std::vector<SolverKind>& all_solvers();

enum class OutputFormat { Table, Csv, Json };

/// Overrides on top of the defaults for a solver.
struct SolveOptions {
  std::optional<double> eta;
  std::optional<double> xi;
  std::optional<double> gamma;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

struct RunResult {
  std::size_t n = 0;
  SolverKind solver = SolverKind::Sda;
  double eta = 0.0;
  double xi = 0.0;
  double gamma = 0.0;  // 0 for SI variants
  int iterations = 0;
  double res = 0.0;
  double err_final = 0.0;
  double wall_ms = 0.0;
  bool converged = false;
  std::optional<IdentityGaps> gaps;
  std::optional<double> shift_gap;
  std::optional<ConvergenceEstimate> estimate;
  // Set when the solve threw; the fields above are then meaningless.
  std::optional<std::string> failure;
  int exit_code = 0;
  Solution solution;
};

/// One `weight node` pair per line; `#` starts a comment. Pairs are sorted
/// by descending node. alpha and c are left at (0, 1).
TransportParams read_nodes_file(const std::string& path);

/// key = value lines with keys alpha, c and either n or nodes/weights
/// (whitespace- or comma-separated lists).
TransportProblem read_problem_file(const std::string& path);

/// Runs one solver; errors from the solver are captured in `failure` and
/// mapped to exit codes (1 invalid input, 2 iteration cap, 3 numerical).
RunResult run_solver(const TransportProblem& problem, SolverKind solver, const SolveOptions& options = {});

std::string csv_header();
std::string csv_row(const RunResult& r);
std::string json_object(const RunResult& r);
std::string format_run_table(const RunResult& r);

/// Grid of all six solvers per size, solved concurrently; results are in
/// (size, solver) order.
std::vector<RunResult> table51(const std::vector<std::size_t>& sizes, const SolveOptions& options = {});
std::string format_table51(const std::vector<RunResult>& results);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nare::cli
