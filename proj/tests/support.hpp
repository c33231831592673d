#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "netprice/enumeration.hpp"
#include "netprice/formulation.hpp"
#include "netprice/network.hpp"
#include "netprice/path.hpp"

namespace testing_support {

using namespace netprice;

inline std::string data_path(const std::string& name) { return std::string(NETPRICE_TEST_DATA) + "/" + name; }

// Figure 1: o=0 u=1 v=2 w=3 d=4.
inline ProblemInstance figure1() { return load_instance(data_path("figure1.npp")); }

enum Fig1Arc { OU = 0, UV = 1, VD = 2, VW = 3, WD = 4, UD = 5, OD = 6 };

inline std::vector<ArcId> arcs_of(const Path& p) { return p.arcs; }

inline Rational path_cost(const Network& net, const std::vector<ArcId>& arcs) {
  Rational sum = 0;
  for (ArcId a : arcs) sum += net.arc(a).cost;
  return sum;
}

inline std::vector<ArcId> tolled_sorted(const Network& net, const std::vector<ArcId>& arcs) {
  std::vector<ArcId> out;
  for (ArcId a : arcs)
    if (net.arc(a).tolled) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

/// Every simple origin-destination path, by plain DFS.
inline std::vector<std::vector<ArcId>> all_simple_paths(const Network& net, NodeId from, NodeId to) {
  std::vector<std::vector<ArcId>> out;
  std::vector<ArcId> stack;
  std::vector<char> seen(static_cast<std::size_t>(net.num_nodes()), 0);
  auto dfs = [&](auto&& self, NodeId i) -> void {
    if (i == to) {
      out.push_back(stack);
      return;
    }
    seen[static_cast<std::size_t>(i)] = 1;
    for (ArcId a : net.out_arcs(i)) {
      NodeId j = net.arc(a).head;
      if (seen[static_cast<std::size_t>(j)]) continue;
      stack.push_back(a);
      self(self, j);
      stack.pop_back();
    }
    seen[static_cast<std::size_t>(i)] = 0;
  };
  dfs(dfs, from);
  return out;
}

/// Survivors of the subset-and-cheaper rule over an arbitrary path list.
inline std::set<std::vector<ArcId>> undominated(const Network& net, const std::vector<std::vector<ArcId>>& paths) {
  std::set<std::vector<ArcId>> out;
  for (const auto& q : paths) {
    const auto tq = tolled_sorted(net, q);
    const Rational cq = path_cost(net, q);
    bool dominated = false;
    for (const auto& p : paths) {
      if (p == q) continue;
      const auto tp = tolled_sorted(net, p);
      if (path_cost(net, p) < cq && std::includes(tq.begin(), tq.end(), tp.begin(), tp.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(q);
  }
  return out;
}

/// Bellman-Ford distances to `target` over arcs with the given costs
/// (nullopt cost = arc unusable).
inline std::vector<std::optional<Rational>> bellman_ford_to(const Network& net, NodeId target,
                                                            const std::vector<std::optional<Rational>>& cost) {
  std::vector<std::optional<Rational>> dist(static_cast<std::size_t>(net.num_nodes()));
  dist[static_cast<std::size_t>(target)] = Rational(0);
  for (int round = 0; round < net.num_nodes(); ++round) {
    for (const Arc& a : net.arcs()) {
      const auto& c = cost[static_cast<std::size_t>(a.id)];
      const auto& dj = dist[static_cast<std::size_t>(a.head)];
      if (!c || !dj) continue;
      auto& di = dist[static_cast<std::size_t>(a.tail)];
      Rational cand = *c + *dj;
      if (!di || cand < *di) di = cand;
    }
  }
  return dist;
}

/// Random strongly connected digraph with generic rational costs. A
/// toll-free Hamiltonian cycle of expensive arcs keeps every commodity
/// toll-free connected.
inline ProblemInstance random_instance(std::mt19937_64& rng, int nodes, int extra_arcs, int commodities,
                                       double tolled_fraction = 0.4) {
  std::uniform_int_distribution<int> node(0, nodes - 1);
  std::uniform_int_distribution<int> numer(1, 1000000);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto generic = [&](int scale) { return Rational(numer(rng) + scale * 1000000, 1000003); };
  std::vector<Arc> arcs;
  std::vector<int> order(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < nodes; ++i)
    arcs.push_back(Arc{0, order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % nodes)],
                       generic(20), false});
  for (int e = 0; e < extra_arcs; ++e) {
    int a = node(rng);
    int b = node(rng);
    if (a == b) continue;
    arcs.push_back(Arc{0, a, b, generic(1), coin(rng) < tolled_fraction});
  }
  ProblemInstance inst{Network(nodes, std::move(arcs)), {}, "random"};
  while (static_cast<int>(inst.commodities.size()) < commodities) {
    int o = node(rng);
    int d = node(rng);
    if (o == d) continue;
    inst.commodities.push_back(Commodity{o, d, Rational(1 + static_cast<int>(inst.commodities.size()))});
  }
  return inst;
}

/// Path sets with cap N+1, big-M values and the assembled hybrid model.
inline HybridModel hybrid_for(const ProblemInstance& inst, const HybridOptions& options) {
  const std::size_t cap = options.breakpoint == kNoBreakpoint ? kNoCap : static_cast<std::size_t>(options.breakpoint) + 1;
  std::vector<BilevelFeasibleSet> sets;
  for (std::size_t k = 0; k < inst.commodities.size(); ++k)
    sets.push_back(bilevel_feasible_paths(inst.network, inst.commodities[k], static_cast<int>(k), cap));
  return assemble_hybrid(inst, sets, compute_bigm(inst.network, inst.commodities, sets), options);
}

inline HybridModel hybrid_for(const ProblemInstance& inst, FormulationKind kind, int breakpoint = kNoBreakpoint,
                              bool reduce = true) {
  HybridOptions options;
  options.main = kind;
  options.breakpoint = breakpoint;
  options.reduce = reduce;
  options.cut_loop_driver = true;
  return hybrid_for(inst, options);
}

}  // namespace testing_support
