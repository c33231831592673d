#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "netprice/formulation.hpp"
#include "netprice/network.hpp"
#include "netprice/solver.hpp"

namespace netprice {

struct RunRecord {
  std::string instance;
  FormulationKind kind = FormulationKind::STD;
  int breakpoint = 1;
  std::string status;  // solver status, or "error"
  bool has_objective = false;
  double objective = 0.0;
  double gap_pct = 0.0;  // infinite without an incumbent
  double enum_time = 0.0;
  double solve_time = 0.0;
  double total_time = 0.0;  // enumeration included
  std::string message;      // error text for failed runs

  bool solved() const { return status == "optimal"; }
};

struct SummaryRow {
  FormulationKind kind = FormulationKind::STD;
  int breakpoint = 1;
  int solved = 0;
  int easy_runs = 0;
  double easy_mean_time = 0.0;  // NaN when the easy group is empty
  int hard_runs = 0;
  double hard_mean_gap = 0.0;   // percent; runs without incumbent count as 100
};

struct SweepOptions {
  std::vector<FormulationKind> kinds{FormulationKind::STD};
  std::vector<int> breakpoints{1};  // kNoBreakpoint enumerates exhaustively
  double budget = 60.0;             // seconds per run, enumeration included
  int workers = 1;
  bool perturb = true;              // break cost ties before enumerating
  std::function<std::unique_ptr<MilpSolver>()> make_solver;  // built-in when empty
};

struct SweepResult {
  std::vector<RunRecord> records;  // instance-major, then kind, then breakpoint
  std::vector<SummaryRow> summary;
  std::vector<std::string> easy;   // instances solved by at least one run
  std::vector<std::string> notes;  // monotonicity reports
};

/// Runs every (instance, kind, breakpoint) combination. A failing run becomes
/// a record with status "error"; the sweep itself does not throw for it.
SweepResult run_sweep(const std::vector<ProblemInstance>& instances, const SweepOptions& options);

/// One run: enumerate with cap N+1, assemble the hybrid with an unreduced STD
/// fallback, solve.
RunRecord run_one(const ProblemInstance& instance, FormulationKind kind, int breakpoint, double budget,
                  MilpSolver& solver);

/// Easy/hard split and per (kind, breakpoint) aggregates, computed after the fact.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records, const std::vector<FormulationKind>& kinds,
                                  const std::vector<int>& breakpoints, std::vector<std::string>* easy = nullptr);

/// Columns: instance,kind,N,status,objective,gap_pct,enum_s,solve_s,total_s.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

std::string breakpoint_label(int breakpoint);
/// Accepts a positive integer or `inf`.
int parse_breakpoint(const std::string& text);

}  // namespace netprice
