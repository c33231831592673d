#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netprice/bigm.hpp"
#include "netprice/enumeration.hpp"
#include "netprice/experiment.hpp"
#include "netprice/formulation.hpp"
#include "netprice/generator.hpp"
#include "netprice/lp_format.hpp"
#include "netprice/preprocess.hpp"
#include "netprice/solver.hpp"

namespace fs = std::filesystem;
using namespace netprice;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

ProblemInstance prepare(const std::string& path, bool perturb, std::uint64_t seed) {
  ProblemInstance inst = load_instance(path);
  if (perturb) inst.network = perturb_costs(inst.network, default_perturbation(inst.network), seed);
  return inst;
}

std::vector<BilevelFeasibleSet> all_sets(const ProblemInstance& inst, std::size_t cap) {
  std::vector<BilevelFeasibleSet> sets;
  for (std::size_t k = 0; k < inst.commodities.size(); ++k)
    sets.push_back(bilevel_feasible_paths(inst.network, inst.commodities[k], static_cast<int>(k), cap));
  return sets;
}

std::size_t cap_for(int breakpoint) {
  return breakpoint == kNoBreakpoint ? kNoCap : static_cast<std::size_t>(breakpoint) + 1;
}

std::string join_nodes(const std::vector<NodeId>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(nodes[i]);
  }
  return out;
}

std::unique_ptr<MilpSolver> solver_from(const std::string& config_path) {
  SolverConfig config;
  if (!config_path.empty()) config = load_config(config_path);
  return make_solver(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network pricing: path enumeration, MILP reformulations, experiments"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "solver configuration file (solver.cmd, solver.workers)")
      ->check(CLI::ExistingFile);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list candidate paths of one commodity in cost order");
  std::string instance_path;
  int commodity = 0;
  std::size_t cap = kNoCap;
  bool filter = false;
  bool enum_perturb = false;
  enumerate->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  enumerate->add_option("--commodity", commodity)->check(CLI::NonNegativeNumber);
  enumerate->add_option("--cap", cap, "stop after this many paths")->check(CLI::PositiveNumber);
  enumerate->add_flag("--filter", filter, "apply the dominance filter");
  enumerate->add_flag("--perturb", enum_perturb, "break cost ties before enumerating");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "per-commodity graph reduction counts");
  std::string method = "paths";
  bool report = false;
  bool no_perturb = false;
  reduce->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  reduce->add_option("--method", method)->check(CLI::IsMember({"paths", "spgm"}));
  reduce->add_flag("--report", report, "print a totals line");
  reduce->add_flag("--no-perturb", no_perturb);

  // build
  auto* build = app.add_subcommand("build", "write the hybrid MILP as an LP file");
  std::string kind_label = "STD";
  std::string main_label;
  std::string fallback_label = "STD";
  std::string breakpoint_text = "inf";
  std::string out_path;
  bool no_reduce = false;
  build->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  build->add_option("--kind", kind_label, "formulation kind of main blocks");
  build->add_option("--main", main_label, "same as --kind");
  build->add_option("--fallback", fallback_label);
  build->add_option("--breakpoint", breakpoint_text, "path-count breakpoint N, or inf");
  build->add_option("--out", out_path)->required();
  build->add_flag("--no-reduce", no_reduce, "keep main blocks on the original graph");
  build->add_flag("--no-perturb", no_perturb);

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance and print the tolls");
  double budget = 60.0;
  solve->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  solve->add_option("--kind", kind_label);
  solve->add_option("--fallback", fallback_label);
  solve->add_option("--breakpoint", breakpoint_text);
  solve->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
  solve->add_flag("--no-reduce", no_reduce);
  solve->add_flag("--no-perturb", no_perturb);

  // lpsolve
  auto* lpsolve = app.add_subcommand("lpsolve", "solve an LP file with the built-in solver");
  std::string lp_path;
  std::string sol_path;
  lpsolve->add_option("--lp", lp_path)->required()->check(CLI::ExistingFile);
  lpsolve->add_option("--sol", sol_path)->required();
  lpsolve->add_option("--budget", budget)->check(CLI::NonNegativeNumber);

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "random instance on a grid, Delaunay or Voronoi graph");
  std::string topology = "grid:5x12";
  GenConfig gen;
  generate_cmd->add_option("--topology", topology, "grid:RxC, delaunay:N or voronoi:N");
  generate_cmd->add_option("--commodities", gen.num_commodities);
  generate_cmd->add_option("--toll-ratio", gen.toll_ratio);
  generate_cmd->add_option("--seed", gen.seed);
  generate_cmd->add_option("--out", out_path)->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "formulation x breakpoint sweep over a directory of instances");
  std::string instances_dir;
  std::string kinds_text = "STD";
  std::string breakpoints_text = "1,10,100";
  std::string summary_path;
  int workers = 0;
  sweep->add_option("--instances", instances_dir)->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--kinds", kinds_text);
  sweep->add_option("--breakpoints", breakpoints_text, "comma list; inf allowed");
  sweep->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", out_path)->required();
  sweep->add_option("--summary", summary_path);
  sweep->add_option("--workers", workers, "default: solver.workers");
  sweep->add_flag("--no-perturb", no_perturb);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enumerate) {
      const ProblemInstance original = load_instance(instance_path);
      if (commodity >= static_cast<int>(original.commodities.size()))
        throw std::invalid_argument("commodity " + std::to_string(commodity) + " out of range");
      const Network net =
          enum_perturb ? perturb_costs(original.network, default_perturbation(original.network), 1) : original.network;
      const Commodity& c = original.commodities[static_cast<std::size_t>(commodity)];
      std::vector<Path> paths;
      if (filter) {
        paths = bilevel_feasible_paths(net, c, commodity, cap).paths;
      } else {
        paths = enumerate_paths(net, c, cap).paths;
      }
      for (const Path& p : paths) {
        const Path shown = make_path(original.network, p.arcs);
        std::cout << format_rational(shown.base_cost) << '\t' << join_nodes(path_nodes(original.network, shown)) << '\n';
      }
      return 0;
    }

    if (*reduce) {
      const ProblemInstance inst = prepare(instance_path, !no_perturb, 1);
      const GraphCounts before = counts(inst.network);
      std::cout << "commodity\tnodes\tarcs\ttolled\n";
      std::cout << "original\t" << before.nodes << '\t' << before.arcs << '\t' << before.tolled << '\n';
      GraphCounts total;
      for (std::size_t k = 0; k < inst.commodities.size(); ++k) {
        const Commodity& c = inst.commodities[k];
        ReducedGraph g;
        if (method == "spgm") {
          g = spgm_transform(inst.network, c);
        } else {
          g = path_based_reduce(inst.network, c, bilevel_feasible_paths(inst.network, c, static_cast<int>(k)));
        }
        const GraphCounts after = counts(g.network);
        total.nodes += after.nodes;
        total.arcs += after.arcs;
        total.tolled += after.tolled;
        std::cout << k << '\t' << after.nodes << '\t' << after.arcs << '\t' << after.tolled << '\n';
      }
      if (report && !inst.commodities.empty()) {
        const double n = static_cast<double>(inst.commodities.size());
        std::cout << "mean ratio\t" << total.nodes / n / std::max(1, before.nodes) << '\t'
                  << total.arcs / n / std::max(1, before.arcs) << '\t' << total.tolled / n / std::max(1, before.tolled)
                  << '\n';
      }
      return 0;
    }

    if (*build || *solve) {
      if (!main_label.empty()) {
        if (build->count("--kind") && main_label != kind_label)
          throw std::invalid_argument("--kind and --main disagree");
        kind_label = main_label;
      }
      const ProblemInstance inst = prepare(instance_path, !no_perturb, 1);
      const int breakpoint = parse_breakpoint(breakpoint_text);
      const std::vector<BilevelFeasibleSet> sets = all_sets(inst, cap_for(breakpoint));
      const BigMParams bigm = compute_bigm(inst.network, inst.commodities, sets);
      HybridOptions options;
      options.breakpoint = breakpoint;
      options.main = parse_kind(kind_label);
      options.fallback = parse_kind(fallback_label);
      options.reduce = !no_reduce;
      options.cut_loop_driver = true;
      HybridModel hm = assemble_hybrid(inst, sets, bigm, options);
      if (*build) {
        write_file(out_path, write_lp(hm.model));
        std::cerr << hm.model.num_variables() << " variables, " << hm.model.num_constraints() << " constraints, "
                  << hm.model.num_binaries() << " binaries\n";
        return 0;
      }
      auto solver = solver_from(config_path);
      const CutLoopResult out = solve_hybrid(hm, *solver, budget);
      std::cout << "status " << to_string(out.result.status) << '\n';
      if (out.result.has_solution()) {
        std::cout << "objective " << out.result.objective << '\n';
        std::cout << "gap " << out.result.gap << '\n';
        for (ArcId a : inst.network.tolled_arcs())
          std::cout << "toll " << a << ' ' << out.result.value("T[" + std::to_string(a) + "]") << '\n';
      }
      std::cout << "rounds " << out.rounds << '\n';
      return out.result.status == SolveStatus::Infeasible ? 2 : 0;
    }

    if (*lpsolve) {
      const ModelIR model = read_lp(read_file(lp_path));
      BuiltinSolver solver;
      SolveResult result = solver.solve(model, budget);
      // The solution file speaks LP names.
      std::map<std::string, double> renamed;
      for (const auto& [name, value] : result.assignment) renamed[lp_name(name)] = value;
      result.assignment = std::move(renamed);
      write_file(sol_path, write_solution(result));
      return 0;
    }

    if (*generate_cmd) {
      gen.topology = parse_topology(topology);
      const ProblemInstance inst = generate(gen);
      save_instance(inst, out_path);
      if (inst.label.find("warning") != std::string::npos) std::cerr << inst.label << '\n';
      return 0;
    }

    if (*sweep) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(instances_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".npp") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw std::invalid_argument("no .npp files in " + instances_dir);
      std::vector<ProblemInstance> instances;
      for (const fs::path& f : files) {
        ProblemInstance inst = load_instance(f.string());
        inst.label = f.stem().string();
        instances.push_back(std::move(inst));
      }
      SolverConfig config;
      if (!config_path.empty()) config = load_config(config_path);
      SweepOptions options;
      options.kinds.clear();
      for (const std::string& k : split_list(kinds_text)) options.kinds.push_back(parse_kind(k));
      options.breakpoints.clear();
      for (const std::string& b : split_list(breakpoints_text)) options.breakpoints.push_back(parse_breakpoint(b));
      options.budget = budget;
      options.workers = workers > 0 ? workers : config.workers;
      options.perturb = !no_perturb;
      options.make_solver = [config] { return make_solver(config); };
      const SweepResult result = run_sweep(instances, options);
      {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_records_csv(out, result.records);
      }
      if (!summary_path.empty()) {
        std::ofstream out(summary_path);
        if (!out) throw std::runtime_error("cannot write " + summary_path);
        write_summary_csv(out, result.summary);
      } else {
        write_summary_csv(std::cout, result.summary);
      }
      for (const RunRecord& r : result.records)
        if (!r.message.empty()) std::cerr << r.instance << ' ' << to_string(r.kind) << ": " << r.message << '\n';
      for (const std::string& note : result.notes) std::cerr << "note: " << note << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
