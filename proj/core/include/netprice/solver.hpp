#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netprice/model.hpp"

namespace netprice {

enum class SolveStatus { Optimal, Feasible, Infeasible, BudgetExhausted };

std::string_view to_string(SolveStatus status);
SolveStatus parse_status(std::string_view text);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;  // (best_bound - objective) / max(1e-10, |best_bound|)
  std::map<std::string, double> assignment;
  double wall_time = 0.0;

  bool has_solution() const { return !assignment.empty(); }
  /// Value of a variable, zero when absent from the assignment.
  double value(const std::string& name) const;
};

/// Relative gap with the convention above; infinite without an incumbent.
double relative_gap(double objective, double best_bound);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MilpSolver {
 public:
  virtual ~MilpSolver() = default;
  /// Maximizes the model within `budget` seconds.
  virtual SolveResult solve(const ModelIR& model, double budget) = 0;
};

/// Dense dual simplex plus branch and bound, for desk-scale models.
class BuiltinSolver : public MilpSolver {
 public:
  SolveResult solve(const ModelIR& model, double budget) override;
};

/// Runs an external program on an LP file. The command template must contain
/// `{lp}` and `{sol}`; the program writes a solution file in the format read
/// by read_solution.
class ExternalSolver : public MilpSolver {
 public:
  explicit ExternalSolver(std::string command);
  SolveResult solve(const ModelIR& model, double budget) override;

 private:
  std::string command_;
};

/// Solution file: optional `# status <s>`, `# objective <v>`, `# bound <v>`
/// header lines, then one `<name> <value>` line per variable. Names are in LP
/// form.
std::string write_solution(const SolveResult& result);
SolveResult read_solution(std::string_view text);

struct SolverConfig {
  std::string command;  // `solver.cmd`; empty selects the built-in solver
  int workers = 1;      // `solver.workers`
};

/// Reads `key = value` lines (`#` comments). Throws ConfigError on unknown
/// keys or a missing file.
SolverConfig load_config(const std::string& path);
std::unique_ptr<MilpSolver> make_solver(const SolverConfig& config);

/// Tags of constraints the assignment violates by more than `tol`, plus
/// `bounds:<var>` / `integrality:<var>` entries.
std::vector<std::string> check_assignment(const ModelIR& model, const SolveResult& result, double tol = 1e-6);

}  // namespace netprice
