#pragma once

#include <climits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "netprice/bigm.hpp"
#include "netprice/enumeration.hpp"
#include "netprice/model.hpp"
#include "netprice/preprocess.hpp"
#include "netprice/solver.hpp"

namespace netprice {

enum class FormulationKind { STD, VF, PASTD, PVF, CS1, CS2, VFCS1, VFCS2, PACS1, PACS2, PCS1, PCS2 };

enum class Rep { Arc, Path };
enum class OptimalityCondition { StrongDuality, ComplementarySlackness };
enum class Linearization { Direct, Substitution };

struct KindTraits {
  Rep primal;
  Rep dual;
  OptimalityCondition condition;
  Linearization linearization;
};

KindTraits traits(FormulationKind kind);
std::string_view to_string(FormulationKind kind);
/// Accepts the labels above, case-insensitively. Throws std::invalid_argument.
FormulationKind parse_kind(std::string_view label);
std::span<const FormulationKind> all_kinds();
/// Kinds that read the path set (path primal or path dual).
bool uses_paths(FormulationKind kind);

/// Which primal variables are binary for a kind (starred in the tables).
struct Integrality {
  bool x = false;
  bool y = false;
  bool z = false;
};
Integrality integrality(FormulationKind kind);

/// One path of a block, in the block's own arc ids.
struct BlockPath {
  std::vector<ArcId> arcs;
  Rational base_cost;
  std::vector<ArcId> tolled;  // original tolled arc ids
};

/// Everything a commodity block needs: its graph, its path set and bounds.
struct CommodityBlock {
  int commodity = 0;
  Rational demand{1};
  ReducedGraph graph;
  std::vector<BlockPath> paths;
  bool exhaustive = false;
  std::vector<BlockPath> cut_paths;  // covered later by cut rows
};

/// Block on `graph`, projecting the original paths onto it. Paths that leave
/// the graph raise std::invalid_argument.
CommodityBlock make_block(int k, const Commodity& commodity, ReducedGraph graph, const BilevelFeasibleSet& paths);

/// Shared context of a build: big-M values and a scale applied to every
/// big-M at emission (values above 1 keep the model exact).
struct BuildContext {
  const BigMParams* bigm = nullptr;
  Rational bigm_scale{1};
};

int toll_variable(ModelIR& model, const Network& original, ArcId arc);

/// Flow-balance rows (arc) or the convexity row (path).
void build_primal(ModelIR& model, Rep rep, const CommodityBlock& block, Integrality binaries);
/// Dual feasibility rows: per-arc potential rows or per-path value rows.
void build_dual(ModelIR& model, Rep rep, const CommodityBlock& block);
/// Optimality coupling and linearization rows of `kind`, plus the objective
/// terms of the block.
void build_coupling(ModelIR& model, FormulationKind kind, const CommodityBlock& block, const BuildContext& ctx);
/// All three for one block.
void build_block(ModelIR& model, FormulationKind kind, const CommodityBlock& block, const BuildContext& ctx);

inline constexpr int kNoBreakpoint = INT_MAX;

enum class BlockRole { Dropped, Main, Fallback };
std::string_view to_string(BlockRole role);

struct HybridOptions {
  int breakpoint = kNoBreakpoint;  // N; kNoBreakpoint means every exhaustive commodity is main
  FormulationKind main = FormulationKind::STD;
  FormulationKind fallback = FormulationKind::STD;
  bool reduce = true;                // main blocks on path-reduced graphs
  bool cut_loop_driver = false;      // caller solves through solve_with_vfcs_cuts
  Rational bigm_scale{1};
};

struct HybridModel {
  ModelIR model;
  std::vector<CommodityBlock> blocks;  // one per commodity, dropped ones included
  std::vector<BlockRole> roles;
  std::vector<FormulationKind> kinds;  // kind per block (meaningless when dropped)
  BigMParams bigm;
  Rational bigm_scale{1};
};

/// Algorithm 2. `paths[k]` is commodity k's set from enumeration with cap N+1.
/// Commodities with a single path are dropped, exhaustive ones with at most
/// N paths get `main`, the rest get `fallback` on the original graph. All
/// blocks share the toll variables T[a].
///
/// Throws std::invalid_argument for breakpoint < 1, a path-reading fallback
/// kind, or a VFCS block without the cut-loop driver.
HybridModel assemble_hybrid(const ProblemInstance& instance, std::span<const BilevelFeasibleSet> paths,
                            const BigMParams& bigm, const HybridOptions& options);

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Path chosen by block `b` in an incumbent (block arc ids), or the arcs of
/// a directed cycle when the selection contains one (`is_cycle`).
struct Selection {
  std::vector<ArcId> arcs;
  bool is_cycle = false;
};
Selection selected_arcs(const HybridModel& hm, int block, const SolveResult& incumbent);

/// Cut for one VFCS block: the linearized complementary-slackness row of the
/// selected path when no existing row covers it, a row over the node set of
/// the first cycle when the selection has one (arcs inside the set sum to at
/// most its size minus one), nothing otherwise.
std::optional<Constraint> vfcs_feasibility_cut(const HybridModel& hm, int block, const SolveResult& incumbent);

/// Cut forbidding the shortest stretch of the selected path whose base cost
/// exceeds the toll-free distance between its ends. No follower ever takes
/// such a stretch, whatever the tolls, so the cut removes only selections
/// the full formulation rejects. Nothing for cycles or covered paths.
std::optional<Constraint> vfcs_detour_cut(const HybridModel& hm, int block, const SolveResult& incumbent);

struct CutLoopResult {
  SolveResult result;
  int rounds = 0;  // solves performed
  int cuts = 0;
};

/// Solves, adds cuts for uncovered selected paths, and re-solves until no
/// cut is produced or the budget is spent.
CutLoopResult solve_with_vfcs_cuts(HybridModel& hm, MilpSolver& solver, double budget, int max_rounds = 1000);

/// Dispatches to the cut loop when the model has VFCS blocks.
CutLoopResult solve_hybrid(HybridModel& hm, MilpSolver& solver, double budget);

}  // namespace netprice
