#include "netprice/formulation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace netprice {

namespace {

constexpr std::array<FormulationKind, 12> kAllKinds = {
    FormulationKind::STD,   FormulationKind::VF,    FormulationKind::PASTD, FormulationKind::PVF,
    FormulationKind::CS1,   FormulationKind::CS2,   FormulationKind::VFCS1, FormulationKind::VFCS2,
    FormulationKind::PACS1, FormulationKind::PACS2, FormulationKind::PCS1,  FormulationKind::PCS2};

std::string idx(int a) { return "[" + std::to_string(a) + "]"; }
std::string idx(int a, int b) { return "[" + std::to_string(a) + "," + std::to_string(b) + "]"; }
std::string idx(int a, int b, const char* c) { return "[" + std::to_string(a) + "," + std::to_string(b) + "," + c + "]"; }

const char* suffix(Rep primal, Rep dual) {
  if (primal == Rep::Arc) return dual == Rep::Arc ? "aa" : "ap";
  return dual == Rep::Arc ? "pa" : "pp";
}

bool is_vfcs(FormulationKind kind) { return kind == FormulationKind::VFCS1 || kind == FormulationKind::VFCS2; }

int arc_var(ModelIR& model, const CommodityBlock& block, ArcId a) {
  const Arc& arc = block.graph.network.arc(a);
  auto v = model.find_variable((arc.tolled ? "x" : "y") + idx(block.commodity, a));
  if (!v) throw ModelError("primal arc block missing for commodity " + std::to_string(block.commodity));
  return *v;
}

int path_var(ModelIR& model, const CommodityBlock& block, int p) {
  auto v = model.find_variable("z" + idx(block.commodity, p));
  if (!v) throw ModelError("primal path block missing for commodity " + std::to_string(block.commodity));
  return *v;
}

int lambda_var(ModelIR& model, const CommodityBlock& block, NodeId i) {
  return model.variable("lambda" + idx(block.commodity, i), VarKind::Continuous, std::nullopt, std::nullopt);
}

int value_var(ModelIR& model, const CommodityBlock& block) {
  return model.variable("L" + idx(block.commodity), VarKind::Continuous, std::nullopt, std::nullopt);
}

int shared_toll(ModelIR& model, ArcId original) { return model.variable("T" + idx(original), VarKind::Continuous); }

const Rational& require(const std::vector<Rational>& values, ArcId a, const char* what) {
  if (a < 0 || static_cast<std::size_t>(a) >= values.size()) throw ModelError(std::string("missing ") + what + " for arc " + std::to_string(a));
  return values[static_cast<std::size_t>(a)];
}

// Tolled arcs of the block, as (block arc, original arc). For a path primal
// only arcs on some path of the block take part in the revenue.
std::vector<std::pair<ArcId, ArcId>> revenue_arcs(const CommodityBlock& block, Rep primal) {
  std::vector<std::pair<ArcId, ArcId>> out;
  const Network& g = block.graph.network;
  std::set<ArcId> on_paths;
  for (const BlockPath& p : block.paths)
    for (ArcId a : p.arcs) on_paths.insert(a);
  for (const Arc& a : g.arcs()) {
    if (!a.tolled) continue;
    if (primal == Rep::Path && !on_paths.count(a.id)) continue;
    out.emplace_back(a.id, block.graph.original_tolled(a.id));
  }
  return out;
}

// Sum over paths of delta_a^p z_p for one block arc.
void add_path_usage(ModelIR& model, LinearExpr& e, const CommodityBlock& block, ArcId a, const Rational& coef) {
  for (std::size_t p = 0; p < block.paths.size(); ++p) {
    const auto& arcs = block.paths[p].arcs;
    if (std::find(arcs.begin(), arcs.end(), a) != arcs.end()) e.add(path_var(model, block, static_cast<int>(p)), coef);
  }
}

Rational path_big_m(const BlockPath& p, const BigMParams& bigm, int k, const Rational& scale) {
  Rational s = p.base_cost - bigm.lower_cost.at(static_cast<std::size_t>(k));
  for (ArcId a : p.tolled) s += require(bigm.toll_cap, a, "toll cap");
  return s * scale;
}

bool is_identity(const ReducedGraph& g) {
  for (std::size_t a = 0; a < g.arc_origin.size(); ++a)
    if (g.arc_origin[a].size() != 1 || g.arc_origin[a].front() != static_cast<ArcId>(a)) return false;
  for (std::size_t v = 0; v < g.node_origin.size(); ++v)
    if (g.node_origin[v] != static_cast<NodeId>(v)) return false;
  return true;
}

int selection_var(const HybridModel& hm, const CommodityBlock& block, ArcId a) {
  const Arc& arc = block.graph.network.arc(a);
  return *hm.model.find_variable((arc.tolled ? "x" : "y") + idx(block.commodity, a));
}

std::string fresh_tag(const ModelIR& model, const std::string& base, int k) {
  int n = 0;
  while (model.has_tag(base + idx(k, n))) ++n;
  return base + idx(k, n);
}

// A simple path keeps at most |S| - 1 arcs inside a node set S. The set is
// given in original node ids; nullopt when the row cannot bind in the block.
std::optional<Constraint> node_set_row(const HybridModel& hm, std::size_t b, const std::set<NodeId>& original_nodes) {
  const CommodityBlock& block = hm.blocks[b];
  const ReducedGraph& g = block.graph;
  std::set<NodeId> inside;
  for (NodeId v = 0; v < g.network.num_nodes(); ++v)
    if (original_nodes.count(g.node_origin[static_cast<std::size_t>(v)])) inside.insert(v);
  Constraint c;
  for (const Arc& arc : g.network.arcs())
    if (inside.count(arc.tail) && inside.count(arc.head)) c.terms.push_back({Rational(1), selection_var(hm, block, arc.id)});
  if (c.terms.size() < inside.size()) return std::nullopt;
  c.sense = Sense::LessEqual;
  c.rhs = static_cast<long>(inside.size()) - 1;
  c.tag = fresh_tag(hm.model, "cycle", block.commodity);
  return c;
}

// At most len - 1 arcs of an arc sequence no follower takes as a whole.
Constraint stretch_row(const HybridModel& hm, std::size_t b, const std::vector<ArcId>& arcs) {
  const CommodityBlock& block = hm.blocks[b];
  Constraint c;
  for (ArcId a : arcs) c.terms.push_back({Rational(1), selection_var(hm, block, a)});
  c.sense = Sense::LessEqual;
  c.rhs = static_cast<long>(arcs.size()) - 1;
  c.tag = fresh_tag(hm.model, "detour", block.commodity);
  return c;
}

}  // namespace

KindTraits traits(FormulationKind kind) {
  using enum Rep;
  const auto SD = OptimalityCondition::StrongDuality;
  const auto CS = OptimalityCondition::ComplementarySlackness;
  const auto D = Linearization::Direct;
  const auto S = Linearization::Substitution;
  switch (kind) {
    case FormulationKind::STD: return {Arc, Arc, SD, D};
    case FormulationKind::VF: return {Arc, Path, SD, D};
    case FormulationKind::PASTD: return {Path, Arc, SD, D};
    case FormulationKind::PVF: return {Path, Path, SD, D};
    case FormulationKind::CS1: return {Arc, Arc, CS, D};
    case FormulationKind::CS2: return {Arc, Arc, CS, S};
    case FormulationKind::VFCS1: return {Arc, Path, CS, D};
    case FormulationKind::VFCS2: return {Arc, Path, CS, S};
    case FormulationKind::PACS1: return {Path, Arc, CS, D};
    case FormulationKind::PACS2: return {Path, Arc, CS, S};
    case FormulationKind::PCS1: return {Path, Path, CS, D};
    case FormulationKind::PCS2: return {Path, Path, CS, S};
  }
  throw std::invalid_argument("unknown formulation kind");
}

std::string_view to_string(FormulationKind kind) {
  switch (kind) {
    case FormulationKind::STD: return "STD";
    case FormulationKind::VF: return "VF";
    case FormulationKind::PASTD: return "PASTD";
    case FormulationKind::PVF: return "PVF";
    case FormulationKind::CS1: return "CS1";
    case FormulationKind::CS2: return "CS2";
    case FormulationKind::VFCS1: return "VFCS1";
    case FormulationKind::VFCS2: return "VFCS2";
    case FormulationKind::PACS1: return "PACS1";
    case FormulationKind::PACS2: return "PACS2";
    case FormulationKind::PCS1: return "PCS1";
    case FormulationKind::PCS2: return "PCS2";
  }
  return "?";
}

FormulationKind parse_kind(std::string_view label) {
  std::string upper(label);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (FormulationKind k : kAllKinds)
    if (to_string(k) == upper) return k;
  throw std::invalid_argument("unknown formulation kind '" + std::string(label) + "'");
}

std::span<const FormulationKind> all_kinds() { return kAllKinds; }

bool uses_paths(FormulationKind kind) {
  KindTraits t = traits(kind);
  return t.primal == Rep::Path || t.dual == Rep::Path;
}

Integrality integrality(FormulationKind kind) {
  KindTraits t = traits(kind);
  Integrality out;
  if (t.primal == Rep::Path) {
    out.z = true;
  } else {
    out.x = true;
    out.y = t.condition == OptimalityCondition::ComplementarySlackness;
  }
  return out;
}

std::string_view to_string(BlockRole role) {
  switch (role) {
    case BlockRole::Dropped: return "dropped";
    case BlockRole::Main: return "main";
    case BlockRole::Fallback: return "fallback";
  }
  return "?";
}

CommodityBlock make_block(int k, const Commodity& commodity, ReducedGraph graph, const BilevelFeasibleSet& paths) {
  CommodityBlock block;
  block.commodity = k;
  block.demand = commodity.demand;
  block.exhaustive = paths.exhaustive;
  for (const Path& p : paths.paths) {
    auto arcs = graph.project(p);
    if (!arcs) throw std::invalid_argument("path of commodity " + std::to_string(k) + " leaves the block graph");
    block.paths.push_back(BlockPath{std::move(*arcs), p.base_cost, p.tolled});
  }
  block.graph = std::move(graph);
  return block;
}

int toll_variable(ModelIR& model, const Network& original, ArcId arc) {
  if (!original.arc(arc).tolled) throw ModelError("arc " + std::to_string(arc) + " carries no toll");
  return shared_toll(model, arc);
}

void build_primal(ModelIR& model, Rep rep, const CommodityBlock& block, Integrality binaries) {
  const int k = block.commodity;
  if (rep == Rep::Path) {
    if (!block.exhaustive) throw std::invalid_argument("path representation needs an exhaustive path set");
    LinearExpr sum;
    for (std::size_t p = 0; p < block.paths.size(); ++p)
      sum.add(model.add_variable("z" + idx(k, static_cast<int>(p)), binaries.z ? VarKind::Binary : VarKind::Continuous), 1);
    model.add_constraint(sum, Sense::Equal, 1, "pp" + idx(k));
    return;
  }
  const Network& g = block.graph.network;
  for (const Arc& a : g.arcs()) {
    const bool bin = a.tolled ? binaries.x : binaries.y;
    model.add_variable((a.tolled ? "x" : "y") + idx(k, a.id), bin ? VarKind::Binary : VarKind::Continuous);
  }
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    LinearExpr e;
    for (ArcId a : g.out_arcs(i)) e.add(arc_var(model, block, a), 1);
    for (ArcId a : g.in_arcs(i)) e.add(arc_var(model, block, a), -1);
    int b = i == block.graph.origin ? 1 : (i == block.graph.destination ? -1 : 0);
    if (e.terms().empty()) {
      if (b != 0) throw ModelError("commodity endpoint without arcs");
      continue;
    }
    model.add_constraint(e, Sense::Equal, b, "pa" + idx(k, i));
  }
}

void build_dual(ModelIR& model, Rep rep, const CommodityBlock& block) {
  const int k = block.commodity;
  if (rep == Rep::Path) {
    if (!block.exhaustive) throw std::invalid_argument("path representation needs an exhaustive path set");
    const int L = value_var(model, block);
    for (std::size_t p = 0; p < block.paths.size(); ++p) {
      LinearExpr e;
      e.add(L, 1);
      for (ArcId a : block.paths[p].tolled) e.add(shared_toll(model, a), -1);
      model.add_constraint(e, Sense::LessEqual, block.paths[p].base_cost, "dp" + idx(k, static_cast<int>(p)));
    }
    return;
  }
  const Network& g = block.graph.network;
  for (NodeId i = 0; i < g.num_nodes(); ++i) lambda_var(model, block, i);
  for (const Arc& a : g.arcs()) {
    LinearExpr e;
    e.add(lambda_var(model, block, a.tail), 1).add(lambda_var(model, block, a.head), -1);
    if (a.tolled) e.add(shared_toll(model, block.graph.original_tolled(a.id)), -1);
    model.add_constraint(e, Sense::LessEqual, a.cost, (a.tolled ? "da1" : "da2") + idx(k, a.id));
  }
}

void build_coupling(ModelIR& model, FormulationKind kind, const CommodityBlock& block, const BuildContext& ctx) {
  if (!ctx.bigm) throw ModelError("big-M parameters required");
  const BigMParams& bigm = *ctx.bigm;
  const Rational& scale = ctx.bigm_scale;
  const KindTraits tr = traits(kind);
  const int k = block.commodity;
  const auto ku = static_cast<std::size_t>(k);
  if (ku >= bigm.lower_cost.size()) throw ModelError("missing big-M entries for commodity " + std::to_string(k));
  const Network& g = block.graph.network;
  const std::string sfx = suffix(tr.primal, tr.dual);

  // Primal cost sum without tolls, shared by the duality and substitution rows.
  auto primal_cost = [&](LinearExpr& e) {
    if (tr.primal == Rep::Arc) {
      for (const Arc& a : g.arcs()) e.add(arc_var(model, block, a.id), a.cost);
    } else {
      for (std::size_t p = 0; p < block.paths.size(); ++p) e.add(path_var(model, block, static_cast<int>(p)), block.paths[p].base_cost);
    }
  };
  auto dual_value = [&](LinearExpr& e) {
    if (tr.dual == Rep::Arc) {
      e.add(lambda_var(model, block, block.graph.origin), -1).add(lambda_var(model, block, block.graph.destination), 1);
    } else {
      e.add(value_var(model, block), -1);
    }
  };

  if (tr.condition == OptimalityCondition::ComplementarySlackness) {
    if (tr.dual == Rep::Arc) {
      BlockDualBounds bounds = compute_block_bounds(block.graph, bigm);
      for (const Arc& a : g.arcs()) {
        const Rational R = bounds.arc_slack[static_cast<std::size_t>(a.id)] * scale;
        LinearExpr e;
        e.add(lambda_var(model, block, a.tail), 1).add(lambda_var(model, block, a.head), -1);
        if (a.tolled) e.add(shared_toll(model, block.graph.original_tolled(a.id)), -1);
        if (tr.primal == Rep::Arc) e.add(arc_var(model, block, a.id), -R);
        else add_path_usage(model, e, block, a.id, -R);
        std::string tag = std::string("lin-cs-") + sfx + (a.tolled ? "1" : "2") + idx(k, a.id);
        model.add_constraint(e, Sense::GreaterEqual, a.cost - R, tag);
      }
    } else {
      const int L = value_var(model, block);
      for (std::size_t p = 0; p < block.paths.size(); ++p) {
        const BlockPath& path = block.paths[p];
        const Rational S = path_big_m(path, bigm, k, scale);
        LinearExpr e;
        e.add(L, 1);
        for (ArcId a : path.tolled) e.add(shared_toll(model, a), -1);
        Rational rhs = path.base_cost - S;
        if (tr.primal == Rep::Path) {
          e.add(path_var(model, block, static_cast<int>(p)), -S);
        } else {
          for (ArcId a : path.arcs) e.add(arc_var(model, block, a), -S);
          rhs = path.base_cost - S * static_cast<long>(path.arcs.size());
        }
        model.add_constraint(e, Sense::GreaterEqual, rhs, "lin-cs-" + sfx + idx(k, static_cast<int>(p)));
      }
    }
  }

  if (tr.linearization == Linearization::Substitution) {
    const int tau = model.add_variable("tau" + idx(k), VarKind::Continuous);
    LinearExpr e;
    primal_cost(e);
    e.add(tau, 1);
    dual_value(e);
    model.add_constraint(e, Sense::Equal, 0, "lin-subs-sd-" + sfx + idx(k));
    model.add_objective(tau, block.demand);
    return;
  }

  // Direct linearization: t = T x per tolled arc.
  const auto arcs = revenue_arcs(block, tr.primal);
  const char* family = tr.primal == Rep::Arc ? "directa" : "directp";
  LinearExpr revenue;
  for (auto [a, orig] : arcs) {
    const int t = model.add_variable("t" + idx(k, orig), VarKind::Continuous);
    const int T = shared_toll(model, orig);
    revenue.add(t, 1);
    model.add_objective(t, block.demand);
    const Rational M = require(bigm.revenue_cap.at(ku), orig, "revenue cap") * scale;
    const Rational N = require(bigm.toll_cap, orig, "toll cap") * scale;
    LinearExpr upper;  // t - M use <= 0
    upper.add(t, 1);
    LinearExpr gap;    // T - t + N use <= N
    gap.add(T, 1).add(t, -1);
    if (tr.primal == Rep::Arc) {
      upper.add(arc_var(model, block, a), -M);
      gap.add(arc_var(model, block, a), N);
    } else {
      add_path_usage(model, upper, block, a, -M);
      add_path_usage(model, gap, block, a, N);
    }
    model.add_constraint(upper, Sense::LessEqual, 0, std::string(family) + "1" + idx(k, orig));
    model.add_constraint(gap, Sense::LessEqual, N, std::string(family) + "2" + idx(k, orig));
    if (tr.condition == OptimalityCondition::ComplementarySlackness) {
      // Without a duality row nothing else keeps t from exceeding T.
      LinearExpr lo;
      lo.add(T, 1).add(t, -1);
      model.add_constraint(lo, Sense::GreaterEqual, 0, std::string(family) + "2" + idx(k, orig, "lo"));
    }
  }
  if (tr.condition == OptimalityCondition::StrongDuality) {
    LinearExpr e = revenue;
    primal_cost(e);
    dual_value(e);
    model.add_constraint(e, Sense::Equal, 0, "lin-sd-" + sfx + idx(k));
  }
}

void build_block(ModelIR& model, FormulationKind kind, const CommodityBlock& block, const BuildContext& ctx) {
  const KindTraits tr = traits(kind);
  build_primal(model, tr.primal, block, integrality(kind));
  build_dual(model, tr.dual, block);
  build_coupling(model, kind, block, ctx);
}

HybridModel assemble_hybrid(const ProblemInstance& instance, std::span<const BilevelFeasibleSet> paths,
                            const BigMParams& bigm, const HybridOptions& options) {
  if (options.breakpoint < 1) throw std::invalid_argument("breakpoint must be at least 1");
  if (uses_paths(options.fallback))
    throw std::invalid_argument("fallback kind must not read path sets: " + std::string(to_string(options.fallback)));
  if (paths.size() != instance.commodities.size()) throw std::invalid_argument("one path set per commodity required");

  HybridModel hm;
  hm.bigm = bigm;
  hm.bigm_scale = options.bigm_scale;
  const Network& net = instance.network;
  for (const Arc& a : net.arcs())
    if (a.tolled) shared_toll(hm.model, a.id);

  for (std::size_t k = 0; k < paths.size(); ++k) {
    const BilevelFeasibleSet& set = paths[k];
    const Commodity& c = instance.commodities[k];
    const int ki = static_cast<int>(k);
    BlockRole role;
    if (set.exhaustive && set.size() == 1) role = BlockRole::Dropped;
    else if (set.exhaustive && set.size() <= static_cast<std::size_t>(options.breakpoint)) role = BlockRole::Main;
    else role = BlockRole::Fallback;

    if (role == BlockRole::Main) {
      if (is_vfcs(options.main) && !options.cut_loop_driver)
        throw std::invalid_argument("VFCS blocks must be solved through the cut loop");
      ReducedGraph g = options.reduce ? path_based_reduce(net, c, set) : identity_graph(net, c);
      hm.blocks.push_back(make_block(ki, c, std::move(g), set));
      hm.kinds.push_back(options.main);
    } else {
      hm.blocks.push_back(make_block(ki, c, identity_graph(net, c), set));
      hm.kinds.push_back(options.fallback);
    }
    hm.roles.push_back(role);
  }

  BuildContext ctx{&hm.bigm, options.bigm_scale};
  for (std::size_t k = 0; k < hm.blocks.size(); ++k)
    if (hm.roles[k] != BlockRole::Dropped) build_block(hm.model, hm.kinds[k], hm.blocks[k], ctx);
  return hm;
}

Selection selected_arcs(const HybridModel& hm, int b, const SolveResult& incumbent) {
  const CommodityBlock& block = hm.blocks.at(static_cast<std::size_t>(b));
  const Network& g = block.graph.network;
  const int k = block.commodity;
  std::vector<char> on(static_cast<std::size_t>(g.num_arcs()), 0);
  for (const Arc& a : g.arcs()) {
    double v = incumbent.value((a.tolled ? "x" : "y") + idx(k, a.id));
    if (std::abs(v - std::round(v)) > 1e-6) throw ConsistencyError("fractional arc value in commodity " + std::to_string(k));
    on[static_cast<std::size_t>(a.id)] = std::round(v) >= 1;
  }

  // Cycle search over the selected arcs (iterative DFS with colors).
  std::vector<int> color(static_cast<std::size_t>(g.num_nodes()), 0);
  std::vector<ArcId> via(static_cast<std::size_t>(g.num_nodes()), -1);
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (color[static_cast<std::size_t>(s)]) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{s, 0}};
    color[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      auto outs = g.out_arcs(node);
      if (next >= outs.size()) {
        color[static_cast<std::size_t>(node)] = 2;
        stack.pop_back();
        continue;
      }
      ArcId a = outs[next++];
      if (!on[static_cast<std::size_t>(a)]) continue;
      NodeId h = g.arc(a).head;
      if (color[static_cast<std::size_t>(h)] == 1) {
        Selection cyc;
        cyc.is_cycle = true;
        cyc.arcs.push_back(a);
        for (NodeId v = node; v != h; v = g.arc(via[static_cast<std::size_t>(v)]).tail)
          cyc.arcs.push_back(via[static_cast<std::size_t>(v)]);
        std::reverse(cyc.arcs.begin(), cyc.arcs.end());
        return cyc;
      }
      if (color[static_cast<std::size_t>(h)] == 0) {
        color[static_cast<std::size_t>(h)] = 1;
        via[static_cast<std::size_t>(h)] = a;
        stack.emplace_back(h, 0);
      }
    }
  }

  Selection path;
  std::size_t used = 0;
  for (char c : on) used += c != 0;
  NodeId at = block.graph.origin;
  while (at != block.graph.destination) {
    ArcId next = -1;
    for (ArcId a : g.out_arcs(at)) {
      if (!on[static_cast<std::size_t>(a)]) continue;
      if (next >= 0) throw ConsistencyError("selection branches in commodity " + std::to_string(k));
      next = a;
    }
    if (next < 0) throw ConsistencyError("selection does not reach the destination in commodity " + std::to_string(k));
    path.arcs.push_back(next);
    at = g.arc(next).head;
  }
  if (path.arcs.size() != used) throw ConsistencyError("selection is not a single path in commodity " + std::to_string(k));
  return path;
}

std::optional<Constraint> vfcs_feasibility_cut(const HybridModel& hm, int b, const SolveResult& incumbent) {
  const auto bu = static_cast<std::size_t>(b);
  if (hm.roles.at(bu) == BlockRole::Dropped || !is_vfcs(hm.kinds.at(bu))) return std::nullopt;
  const CommodityBlock& block = hm.blocks[bu];
  const int k = block.commodity;
  const ModelIR& model = hm.model;
  auto var_of = [&](ArcId a) {
    const Arc& arc = block.graph.network.arc(a);
    return *model.find_variable((arc.tolled ? "x" : "y") + idx(k, a));
  };

  Selection sel = selected_arcs(hm, b, incumbent);
  if (sel.is_cycle) {
    std::set<NodeId> nodes;
    for (ArcId a : sel.arcs) nodes.insert(block.graph.node_origin[static_cast<std::size_t>(block.graph.network.arc(a).tail)]);
    return node_set_row(hm, bu, nodes);
  }
  for (const BlockPath& p : block.paths)
    if (p.arcs == sel.arcs) return std::nullopt;
  for (const BlockPath& p : block.cut_paths)
    if (p.arcs == sel.arcs) return std::nullopt;

  BlockPath p;
  p.arcs = sel.arcs;
  for (ArcId a : sel.arcs) {
    const Arc& arc = block.graph.network.arc(a);
    p.base_cost += arc.cost;
    if (arc.tolled) p.tolled.push_back(block.graph.original_tolled(a));
  }
  const Rational S = path_big_m(p, hm.bigm, k, hm.bigm_scale);
  LinearExpr e;
  e.add(*model.find_variable("L" + idx(k)), 1);
  for (ArcId a : p.tolled) e.add(*model.find_variable("T" + idx(a)), -1);
  for (ArcId a : p.arcs) e.add(var_of(a), -S);
  const std::string sfx = "ap";
  const std::string tag = "lin-cs-" + sfx + idx(k, static_cast<int>(block.paths.size() + block.cut_paths.size()));
  return Constraint{e.terms(), Sense::GreaterEqual, p.base_cost - S * static_cast<long>(p.arcs.size()), tag};
}

namespace {

// Shortest stretch of the selected path whose base cost exceeds the toll-free
// distance between its ends.
std::optional<std::vector<ArcId>> detour_stretch(const HybridModel& hm, int b, const SolveResult& incumbent) {
  const auto bu = static_cast<std::size_t>(b);
  if (hm.roles.at(bu) == BlockRole::Dropped || !is_vfcs(hm.kinds.at(bu))) return std::nullopt;
  const CommodityBlock& block = hm.blocks[bu];
  const Network& g = block.graph.network;
  Selection sel = selected_arcs(hm, b, incumbent);
  if (sel.is_cycle) return std::nullopt;
  for (const BlockPath& p : block.paths)
    if (p.arcs == sel.arcs) return std::nullopt;

  const std::size_t m = sel.arcs.size();
  std::vector<NodeId> nodes{g.arc(sel.arcs.front()).tail};
  std::vector<Rational> prefix{Rational(0)};
  for (ArcId a : sel.arcs) {
    nodes.push_back(g.arc(a).head);
    prefix.push_back(prefix.back() + g.arc(a).cost);
  }
  std::size_t best_i = 0, best_j = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    const DistanceMap dist = distances_to(g, nodes[j], TollRegime::infinite());
    for (std::size_t i = j; i-- > 0;) {
      if (best_j && j - i >= best_j - best_i) break;
      const auto& d = dist[static_cast<std::size_t>(nodes[i])];
      if (d && prefix[j] - prefix[i] > *d) {
        best_i = i;
        best_j = j;
        break;
      }
    }
  }
  if (!best_j) return std::nullopt;
  return std::vector<ArcId>(sel.arcs.begin() + static_cast<std::ptrdiff_t>(best_i),
                            sel.arcs.begin() + static_cast<std::ptrdiff_t>(best_j));
}

}  // namespace

std::optional<Constraint> vfcs_detour_cut(const HybridModel& hm, int b, const SolveResult& incumbent) {
  auto stretch = detour_stretch(hm, b, incumbent);
  if (!stretch) return std::nullopt;
  return stretch_row(hm, static_cast<std::size_t>(b), *stretch);
}

CutLoopResult solve_with_vfcs_cuts(HybridModel& hm, MilpSolver& solver, double budget, int max_rounds) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  CutLoopResult out;
  std::set<std::pair<std::size_t, std::set<NodeId>>> cut_node_sets;
  std::set<std::pair<std::size_t, std::vector<ArcId>>> cut_stretches;
  // A path never uses both arcs of an antiparallel pair; rows for all pairs up
  // front spare the loop one cycle cut each.
  for (std::size_t b = 0; b < hm.blocks.size(); ++b) {
    if (hm.roles[b] == BlockRole::Dropped || !is_vfcs(hm.kinds[b])) continue;
    const int k = hm.blocks[b].commodity;
    const Network& g = hm.blocks[b].graph.network;
    auto var_of = [&](const Arc& arc) { return *hm.model.find_variable((arc.tolled ? "x" : "y") + idx(k, arc.id)); };
    for (const Arc& a : g.arcs()) {
      for (ArcId r : g.out_arcs(a.head)) {
        const Arc& back = g.arc(r);
        if (back.head != a.tail || back.id <= a.id) continue;
        const std::string tag = "twin" + idx(k, a.id, std::to_string(back.id).c_str());
        if (hm.model.has_tag(tag)) continue;
        hm.model.add_constraint(LinearExpr{}.add(var_of(a), 1).add(var_of(back), 1), Sense::LessEqual, Rational(1), tag);
      }
    }
  }
  for (;;) {
    const double remaining = std::max(0.0, budget - elapsed());
    out.result = solver.solve(hm.model, remaining);
    ++out.rounds;
    if (!out.result.has_solution()) break;
    int added = 0;
    auto add = [&](std::optional<Constraint> row) {
      if (!row) return;
      hm.model.add_constraint(std::move(*row));
      ++added;
    };
    for (std::size_t b = 0; b < hm.blocks.size(); ++b) {
      if (hm.roles[b] == BlockRole::Dropped || !is_vfcs(hm.kinds[b])) continue;
      const CommodityBlock& block = hm.blocks[b];
      const int bi = static_cast<int>(b);
      // Peel off every cycle of the selection, then look at the path left.
      SolveResult view = out.result;
      for (;;) {
        Selection sel = selected_arcs(hm, bi, view);
        if (!sel.is_cycle) break;
        std::set<NodeId> nodes;
        for (ArcId a : sel.arcs) {
          const Arc& arc = block.graph.network.arc(a);
          nodes.insert(block.graph.node_origin[static_cast<std::size_t>(arc.tail)]);
          view.assignment[(arc.tolled ? "x" : "y") + idx(block.commodity, a)] = 0.0;
        }
        // No follower path has a cycle, so the row is shared by every block.
        for (std::size_t o = 0; o < hm.blocks.size(); ++o)
          if (hm.roles[o] != BlockRole::Dropped && is_vfcs(hm.kinds[o]) && cut_node_sets.insert({o, nodes}).second)
            add(node_set_row(hm, o, nodes));
      }
      if (auto stretch = detour_stretch(hm, bi, view)) {
        // Blocks on the unreduced graph share arc ids, so they share the row.
        const bool plain = is_identity(block.graph);
        for (std::size_t o = 0; o < hm.blocks.size(); ++o) {
          const bool same = o == b || (plain && hm.roles[o] != BlockRole::Dropped && is_vfcs(hm.kinds[o]) &&
                                       is_identity(hm.blocks[o].graph));
          if (same && cut_stretches.insert({o, *stretch}).second) add(stretch_row(hm, o, *stretch));
        }
      }
      if (auto cut = vfcs_feasibility_cut(hm, bi, view)) {
        BlockPath p;
        p.arcs = selected_arcs(hm, bi, view).arcs;
        hm.blocks[b].cut_paths.push_back(std::move(p));
        add(std::move(cut));
      }
    }
    out.cuts += added;
    if (added == 0) break;
    if (out.result.status != SolveStatus::Optimal || out.rounds >= max_rounds || elapsed() >= budget) {
      // The incumbent violates a cut, so only the bound survives.
      out.result.status = SolveStatus::BudgetExhausted;
      out.result.assignment.clear();
      out.result.objective = -std::numeric_limits<double>::infinity();
      out.result.gap = std::numeric_limits<double>::infinity();
      break;
    }
  }
  out.result.wall_time = elapsed();
  return out;
}

CutLoopResult solve_hybrid(HybridModel& hm, MilpSolver& solver, double budget) {
  for (std::size_t b = 0; b < hm.blocks.size(); ++b)
    if (hm.roles[b] != BlockRole::Dropped && is_vfcs(hm.kinds[b])) return solve_with_vfcs_cuts(hm, solver, budget);
  CutLoopResult out;
  out.result = solver.solve(hm.model, budget);
  out.rounds = 1;
  return out;
}

}  // namespace netprice
