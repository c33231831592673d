#include "netprice/preprocess.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace netprice {

namespace {

// Working arc used while rebuilding a graph; endpoints are original-space
// node ids of the graph being transformed.
struct WorkArc {
  NodeId tail;
  NodeId head;
  Rational cost;
  bool tolled;
  std::vector<ArcId> origin;
  bool alive = true;
};

ReducedGraph assemble(int num_nodes, const std::vector<WorkArc>& arcs, const std::vector<NodeId>& node_origin_in,
                      NodeId origin, NodeId destination) {
  // Renumber surviving nodes densely in increasing id order.
  std::vector<char> used(static_cast<std::size_t>(num_nodes), 0);
  used[static_cast<std::size_t>(origin)] = 1;
  used[static_cast<std::size_t>(destination)] = 1;
  for (const WorkArc& w : arcs) {
    if (!w.alive) continue;
    used[static_cast<std::size_t>(w.tail)] = 1;
    used[static_cast<std::size_t>(w.head)] = 1;
  }
  std::vector<NodeId> renumber(static_cast<std::size_t>(num_nodes), -1);
  ReducedGraph g;
  for (NodeId i = 0; i < num_nodes; ++i) {
    if (!used[static_cast<std::size_t>(i)]) continue;
    renumber[static_cast<std::size_t>(i)] = static_cast<NodeId>(g.node_origin.size());
    g.node_origin.push_back(node_origin_in[static_cast<std::size_t>(i)]);
  }

  std::vector<const WorkArc*> alive;
  for (const WorkArc& w : arcs)
    if (w.alive) alive.push_back(&w);
  std::stable_sort(alive.begin(), alive.end(),
                   [](const WorkArc* a, const WorkArc* b) { return a->origin.front() < b->origin.front(); });

  std::vector<Arc> out;
  for (const WorkArc* w : alive) {
    Arc arc;
    arc.tail = renumber[static_cast<std::size_t>(w->tail)];
    arc.head = renumber[static_cast<std::size_t>(w->head)];
    arc.cost = w->cost;
    arc.tolled = w->tolled;
    out.push_back(arc);
    g.arc_origin.push_back(w->origin);
  }
  g.network = Network(static_cast<int>(g.node_origin.size()), std::move(out));
  g.origin = renumber[static_cast<std::size_t>(origin)];
  g.destination = renumber[static_cast<std::size_t>(destination)];
  return g;
}

void compress_chains(int num_nodes, std::vector<WorkArc>& arcs, NodeId origin, NodeId destination) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::size_t>> in(static_cast<std::size_t>(num_nodes));
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_nodes));
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (!arcs[a].alive) continue;
      out[static_cast<std::size_t>(arcs[a].tail)].push_back(a);
      in[static_cast<std::size_t>(arcs[a].head)].push_back(a);
    }
    for (NodeId v = 0; v < num_nodes; ++v) {
      if (v == origin || v == destination) continue;
      const auto& vi = in[static_cast<std::size_t>(v)];
      const auto& vo = out[static_cast<std::size_t>(v)];
      if (vi.size() != 1 || vo.size() != 1) continue;
      WorkArc& first = arcs[vi.front()];
      WorkArc& second = arcs[vo.front()];
      if (first.tolled || second.tolled || first.tail == second.head) continue;
      if (!first.alive || !second.alive) continue;
      first.head = second.head;
      first.cost += second.cost;
      first.origin.insert(first.origin.end(), second.origin.begin(), second.origin.end());
      second.alive = false;
      changed = true;
      break;  // adjacency is stale; rebuild
    }
  }
}

std::vector<WorkArc> work_arcs(const ReducedGraph& g) {
  std::vector<WorkArc> arcs;
  for (const Arc& a : g.network.arcs())
    arcs.push_back(WorkArc{a.tail, a.head, a.cost, a.tolled, g.arc_origin[static_cast<std::size_t>(a.id)]});
  return arcs;
}

std::vector<NodeId> compose_nodes(const ReducedGraph& g) { return g.node_origin; }

ReducedGraph spgm_on(int num_nodes, std::vector<WorkArc> arcs, const std::vector<NodeId>& node_origin, NodeId origin,
                     NodeId destination) {
  std::vector<char> touches_toll(static_cast<std::size_t>(num_nodes), 0);
  for (const WorkArc& w : arcs) {
    if (!w.tolled) continue;
    touches_toll[static_cast<std::size_t>(w.tail)] = 1;
    touches_toll[static_cast<std::size_t>(w.head)] = 1;
  }

  for (NodeId v = 0; v < num_nodes; ++v) {
    if (v == origin || v == destination || touches_toll[static_cast<std::size_t>(v)]) continue;
    std::vector<std::size_t> in;
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      if (!arcs[a].alive) continue;
      if (arcs[a].head == v) in.push_back(a);
      if (arcs[a].tail == v) out.push_back(a);
    }
    std::vector<WorkArc> shortcuts;
    for (std::size_t i : in) {
      for (std::size_t o : out) {
        if (arcs[i].tail == arcs[o].head) continue;
        WorkArc s{arcs[i].tail, arcs[o].head, arcs[i].cost + arcs[o].cost, false, arcs[i].origin};
        s.origin.insert(s.origin.end(), arcs[o].origin.begin(), arcs[o].origin.end());
        shortcuts.push_back(std::move(s));
      }
    }
    for (std::size_t a : in) arcs[a].alive = false;
    for (std::size_t a : out) arcs[a].alive = false;
    for (WorkArc& s : shortcuts) arcs.push_back(std::move(s));

    // Keep only the cheapest toll-free arc per (tail, head).
    std::map<std::pair<NodeId, NodeId>, std::size_t> best;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      WorkArc& w = arcs[a];
      if (!w.alive || w.tolled) continue;
      auto key = std::make_pair(w.tail, w.head);
      auto it = best.find(key);
      if (it == best.end()) {
        best.emplace(key, a);
      } else if (w.cost < arcs[it->second].cost) {
        arcs[it->second].alive = false;
        it->second = a;
      } else {
        w.alive = false;
      }
    }
  }
  return assemble(num_nodes, arcs, node_origin, origin, destination);
}

}  // namespace

std::optional<std::vector<ArcId>> ReducedGraph::project(const Path& original) const {
  std::map<ArcId, ArcId> first_of;  // original arc -> reduced arc whose chain starts with it
  for (std::size_t r = 0; r < arc_origin.size(); ++r) first_of.emplace(arc_origin[r].front(), static_cast<ArcId>(r));

  std::vector<ArcId> reduced;
  std::size_t i = 0;
  while (i < original.arcs.size()) {
    auto it = first_of.find(original.arcs[i]);
    if (it == first_of.end()) return std::nullopt;
    const auto& chain = arc_origin[static_cast<std::size_t>(it->second)];
    if (i + chain.size() > original.arcs.size()) return std::nullopt;
    if (!std::equal(chain.begin(), chain.end(), original.arcs.begin() + static_cast<long>(i))) return std::nullopt;
    reduced.push_back(it->second);
    i += chain.size();
  }
  return reduced;
}

std::vector<ArcId> ReducedGraph::lift(const std::vector<ArcId>& reduced_arcs) const {
  std::vector<ArcId> arcs;
  for (ArcId r : reduced_arcs) {
    const auto& chain = arc_origin[static_cast<std::size_t>(r)];
    arcs.insert(arcs.end(), chain.begin(), chain.end());
  }
  return arcs;
}

ReducedGraph identity_graph(const Network& net, const Commodity& commodity) {
  ReducedGraph g;
  g.network = net;
  for (const Arc& a : net.arcs()) g.arc_origin.push_back({a.id});
  for (NodeId i = 0; i < net.num_nodes(); ++i) g.node_origin.push_back(i);
  g.origin = commodity.origin;
  g.destination = commodity.destination;
  return g;
}

ReducedGraph path_based_reduce(const Network& net, const Commodity& commodity, const BilevelFeasibleSet& paths) {
  if (!paths.exhaustive) throw std::invalid_argument("path-based reduction needs an exhaustive bilevel-feasible set");

  std::vector<char> keep(static_cast<std::size_t>(net.num_arcs()), 0);
  for (const Path& p : paths.paths)
    for (ArcId a : p.arcs) keep[static_cast<std::size_t>(a)] = 1;

  std::vector<WorkArc> arcs;
  for (const Arc& a : net.arcs())
    if (keep[static_cast<std::size_t>(a.id)]) arcs.push_back(WorkArc{a.tail, a.head, a.cost, a.tolled, {a.id}});

  compress_chains(net.num_nodes(), arcs, commodity.origin, commodity.destination);
  std::vector<NodeId> ids(static_cast<std::size_t>(net.num_nodes()));
  for (NodeId i = 0; i < net.num_nodes(); ++i) ids[static_cast<std::size_t>(i)] = i;
  return assemble(net.num_nodes(), arcs, ids, commodity.origin, commodity.destination);
}

ReducedGraph spgm_transform(const Network& net, const Commodity& commodity) {
  return spgm_transform(identity_graph(net, commodity));
}

ReducedGraph spgm_transform(const ReducedGraph& graph) {
  return spgm_on(graph.network.num_nodes(), work_arcs(graph), compose_nodes(graph), graph.origin,
                 graph.destination);
}

GraphCounts counts(const Network& net) { return {net.num_nodes(), net.num_arcs(), net.num_tolled()}; }

}  // namespace netprice
