#include "netprice/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "netprice/bigm.hpp"
#include "netprice/enumeration.hpp"

namespace netprice {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(10) << value;
  return out.str();
}

std::string format_time(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << value;
  return out.str();
}

}  // namespace

std::string breakpoint_label(int breakpoint) {
  return breakpoint == kNoBreakpoint ? "inf" : std::to_string(breakpoint);
}

int parse_breakpoint(const std::string& text) {
  if (text == "inf") return kNoBreakpoint;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 1) throw std::invalid_argument("bad breakpoint '" + text + "'");
  return value;
}

RunRecord run_one(const ProblemInstance& instance, FormulationKind kind, int breakpoint, double budget,
                  MilpSolver& solver) {
  RunRecord rec;
  rec.instance = instance.label;
  rec.kind = kind;
  rec.breakpoint = breakpoint;
  rec.gap_pct = std::numeric_limits<double>::infinity();
  const auto start = Clock::now();
  try {
    const std::size_t cap = breakpoint == kNoBreakpoint ? kNoCap : static_cast<std::size_t>(breakpoint) + 1;
    std::vector<BilevelFeasibleSet> sets;
    sets.reserve(instance.commodities.size());
    for (std::size_t k = 0; k < instance.commodities.size(); ++k)
      sets.push_back(bilevel_feasible_paths(instance.network, instance.commodities[k], static_cast<int>(k), cap));
    rec.enum_time = seconds_since(start);

    const double remaining = budget - rec.enum_time;
    if (remaining <= 0) {
      rec.status = std::string(to_string(SolveStatus::BudgetExhausted));
    } else {
      const BigMParams bigm = compute_bigm(instance.network, instance.commodities, sets);
      HybridOptions options;
      options.breakpoint = breakpoint;
      options.main = kind;
      options.fallback = FormulationKind::STD;
      options.cut_loop_driver = true;
      HybridModel hm = assemble_hybrid(instance, sets, bigm, options);
      const auto solve_start = Clock::now();
      const CutLoopResult out = solve_hybrid(hm, solver, remaining);
      rec.solve_time = seconds_since(solve_start);
      rec.status = std::string(to_string(out.result.status));
      if (out.result.has_solution()) {
        rec.has_objective = true;
        rec.objective = out.result.objective;
        rec.gap_pct = 100.0 * out.result.gap;
      }
    }
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.message = e.what();
  }
  rec.total_time = seconds_since(start);
  return rec;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records, const std::vector<FormulationKind>& kinds,
                                  const std::vector<int>& breakpoints, std::vector<std::string>* easy) {
  std::set<std::string> solved_instances;
  for (const RunRecord& r : records)
    if (r.solved()) solved_instances.insert(r.instance);
  if (easy) easy->assign(solved_instances.begin(), solved_instances.end());

  std::vector<SummaryRow> rows;
  for (FormulationKind kind : kinds) {
    for (int n : breakpoints) {
      SummaryRow row;
      row.kind = kind;
      row.breakpoint = n;
      double time_sum = 0.0;
      double gap_sum = 0.0;
      for (const RunRecord& r : records) {
        if (r.kind != kind || r.breakpoint != n) continue;
        if (r.solved()) ++row.solved;
        if (solved_instances.count(r.instance)) {
          ++row.easy_runs;
          time_sum += r.total_time;
        } else {
          ++row.hard_runs;
          gap_sum += std::isfinite(r.gap_pct) ? r.gap_pct : 100.0;
        }
      }
      row.easy_mean_time = row.easy_runs ? time_sum / row.easy_runs : std::nan("");
      row.hard_mean_gap = row.hard_runs ? gap_sum / row.hard_runs : std::nan("");
      rows.push_back(row);
    }
  }
  return rows;
}

SweepResult run_sweep(const std::vector<ProblemInstance>& instances, const SweepOptions& options) {
  if (options.kinds.empty() || options.breakpoints.empty()) throw std::invalid_argument("empty sweep");

  std::vector<ProblemInstance> prepared = instances;
  if (options.perturb) {
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      Network& net = prepared[i].network;
      net = perturb_costs(net, default_perturbation(net), 1000 + i);
    }
  }

  const std::size_t per_instance = options.kinds.size() * options.breakpoints.size();
  SweepResult result;
  result.records.resize(prepared.size() * per_instance);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::unique_ptr<MilpSolver> solver =
        options.make_solver ? options.make_solver() : std::make_unique<BuiltinSolver>();
    for (std::size_t job = next++; job < result.records.size(); job = next++) {
      const std::size_t i = job / per_instance;
      const std::size_t rest = job % per_instance;
      const FormulationKind kind = options.kinds[rest / options.breakpoints.size()];
      const int n = options.breakpoints[rest % options.breakpoints.size()];
      result.records[job] = run_one(prepared[i], kind, n, options.budget, *solver);
    }
  };
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(result.records.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.summary = summarize(result.records, options.kinds, options.breakpoints, &result.easy);

  // Enumeration time should not drop as N grows; report, don't enforce.
  std::vector<int> sorted = options.breakpoints;
  std::sort(sorted.begin(), sorted.end());
  for (const ProblemInstance& inst : prepared) {
    for (FormulationKind kind : options.kinds) {
      std::map<int, double> times;
      for (const RunRecord& r : result.records)
        if (r.instance == inst.label && r.kind == kind && r.status != "error") times[r.breakpoint] = r.enum_time;
      double prev = 0.0;
      int prev_n = 0;
      for (auto [n, t] : times) {
        if (prev_n && t + 1e-3 < prev)
          result.notes.push_back(inst.label + " " + std::string(to_string(kind)) + ": enumeration at N=" +
                                 breakpoint_label(n) + " faster than at N=" + breakpoint_label(prev_n));
        prev = t;
        prev_n = n;
      }
    }
  }
  return result;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "instance,kind,N,status,objective,gap_pct,enum_s,solve_s,total_s\n";
  for (const RunRecord& r : records) {
    out << r.instance << ',' << to_string(r.kind) << ',' << breakpoint_label(r.breakpoint) << ',' << r.status << ','
        << (r.has_objective ? format_number(r.objective) : "") << ',' << format_number(r.gap_pct) << ','
        << format_time(r.enum_time) << ',' << format_time(r.solve_time) << ',' << format_time(r.total_time) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "kind,N,solved,easy_runs,easy_mean_s,hard_runs,hard_mean_gap_pct\n";
  for (const SummaryRow& s : summary) {
    out << to_string(s.kind) << ',' << breakpoint_label(s.breakpoint) << ',' << s.solved << ',' << s.easy_runs << ','
        << format_number(s.easy_mean_time) << ',' << s.hard_runs << ',' << format_number(s.hard_mean_gap) << '\n';
  }
}

}  // namespace netprice
