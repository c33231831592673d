#include "netprice/shortest_path.hpp"

#include <queue>

namespace netprice {

std::optional<Rational> TollRegime::cost(const Arc& arc) const {
  if (!arc.tolled) return arc.cost;
  switch (mode_) {
    case Mode::Zero:
      return arc.cost;
    case Mode::Infinite:
      return std::nullopt;
    case Mode::Capped:
      return arc.cost + caps_.at(static_cast<std::size_t>(arc.id));
  }
  return std::nullopt;
}

void ExclusionSet::exclude_arc(ArcId a) {
  if (a >= static_cast<ArcId>(arcs_.size())) arcs_.resize(static_cast<std::size_t>(a) + 1, false);
  if (!arcs_[static_cast<std::size_t>(a)]) ++count_;
  arcs_[static_cast<std::size_t>(a)] = true;
}

void ExclusionSet::exclude_node(NodeId i) {
  if (i >= static_cast<NodeId>(nodes_.size())) nodes_.resize(static_cast<std::size_t>(i) + 1, false);
  if (!nodes_[static_cast<std::size_t>(i)]) ++count_;
  nodes_[static_cast<std::size_t>(i)] = true;
}

namespace {

bool arc_alive(const Arc& arc, const ExclusionSet& excluded) {
  return !excluded.arc_excluded(arc.id) && !excluded.node_excluded(arc.tail) && !excluded.node_excluded(arc.head);
}

}  // namespace

DistanceMap distances_to(const Network& net, NodeId destination, const TollRegime& regime,
                         const ExclusionSet& excluded) {
  DistanceMap dist(static_cast<std::size_t>(net.num_nodes()));
  if (excluded.node_excluded(destination)) return dist;

  using Entry = std::pair<Rational, NodeId>;
  auto greater = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(greater)> heap(greater);
  std::vector<char> done(static_cast<std::size_t>(net.num_nodes()), 0);

  dist[static_cast<std::size_t>(destination)] = Rational(0);
  heap.emplace(Rational(0), destination);
  while (!heap.empty()) {
    auto [d, j] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(j)]) continue;
    done[static_cast<std::size_t>(j)] = 1;
    for (ArcId a : net.in_arcs(j)) {
      const Arc& arc = net.arc(a);
      if (!arc_alive(arc, excluded)) continue;
      auto c = regime.cost(arc);
      if (!c) continue;
      Rational candidate = d + *c;
      auto& slot = dist[static_cast<std::size_t>(arc.tail)];
      if (!slot || candidate < *slot) {
        slot = candidate;
        heap.emplace(candidate, arc.tail);
      }
    }
  }
  return dist;
}

std::optional<PathResult> shortest_path(const Network& net, NodeId source, NodeId target, const TollRegime& regime,
                                        const ExclusionSet& excluded) {
  if (excluded.node_excluded(source)) return std::nullopt;
  DistanceMap dist = distances_to(net, target, regime, excluded);
  if (!dist[static_cast<std::size_t>(source)]) return std::nullopt;

  // Every arc that is tight against the distance labels leads strictly closer
  // to the target (costs are positive), so the greedy walk picking the
  // smallest tight arc id is simple and lexicographically minimal.
  std::vector<ArcId> arcs;
  NodeId at = source;
  while (at != target) {
    ArcId best = -1;
    const Rational& here = *dist[static_cast<std::size_t>(at)];
    for (ArcId a : net.out_arcs(at)) {
      const Arc& arc = net.arc(a);
      if (!arc_alive(arc, excluded)) continue;
      auto c = regime.cost(arc);
      const auto& next = dist[static_cast<std::size_t>(arc.head)];
      if (!c || !next) continue;
      if (*c + *next == here && (best < 0 || a < best)) best = a;
    }
    if (best < 0) return std::nullopt;  // unreachable with positive costs
    arcs.push_back(best);
    at = net.arc(best).head;
  }
  PathResult result{make_path(net, std::move(arcs)), *dist[static_cast<std::size_t>(source)]};
  return result;
}

bool reachable(const Network& net, NodeId source, NodeId target, bool toll_free_only) {
  std::vector<char> seen(static_cast<std::size_t>(net.num_nodes()), 0);
  std::vector<NodeId> stack{source};
  seen[static_cast<std::size_t>(source)] = 1;
  while (!stack.empty()) {
    NodeId i = stack.back();
    stack.pop_back();
    if (i == target) return true;
    for (ArcId a : net.out_arcs(i)) {
      const Arc& arc = net.arc(a);
      if (toll_free_only && arc.tolled) continue;
      if (!seen[static_cast<std::size_t>(arc.head)]) {
        seen[static_cast<std::size_t>(arc.head)] = 1;
        stack.push_back(arc.head);
      }
    }
  }
  return false;
}

}  // namespace netprice
