#include "netprice/enumeration.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>

#include "netprice/shortest_path.hpp"

namespace netprice {

Network perturb_costs(const Network& net, const Rational& magnitude, std::uint64_t seed) {
  if (magnitude <= 0) throw std::invalid_argument("perturbation magnitude must be positive");

  std::mt19937_64 rng(seed);
  constexpr std::uint64_t kSteps = std::uint64_t{1} << 53;
  std::uniform_int_distribution<std::uint64_t> draw(1, kSteps);
  const Rational step = magnitude / Rational(mpz_class(std::to_string(kSteps)));

  std::vector<Rational> costs(static_cast<std::size_t>(net.num_arcs()));
  std::vector<char> assigned(costs.size(), 0);
  for (const Arc& arc : net.arcs()) {
    auto a = static_cast<std::size_t>(arc.id);
    if (assigned[a]) continue;
    Rational delta = step * Rational(mpz_class(std::to_string(draw(rng))));
    costs[a] = arc.cost + delta;
    assigned[a] = 1;
    for (ArcId b : net.out_arcs(arc.head)) {
      const Arc& twin = net.arc(b);
      auto bi = static_cast<std::size_t>(b);
      if (!assigned[bi] && twin.head == arc.tail && twin.cost == arc.cost && twin.tolled == arc.tolled) {
        costs[bi] = twin.cost + delta;
        assigned[bi] = 1;
        break;
      }
    }
  }
  return net.with_costs(costs);
}

Rational default_perturbation(const Network& net) {
  if (net.num_arcs() == 0) return Rational(1, 1000000000);
  Rational smallest = net.arc(0).cost;
  for (const Arc& a : net.arcs()) smallest = std::min(smallest, a.cost);
  if (smallest <= 0) smallest = 1;
  return smallest / 1000000000;
}

namespace {

struct Candidate {
  Path path;
  NodeId spur = 0;
  std::vector<ArcId> excluded;  // R(q), sorted
};

struct CandidateGreater {
  bool operator()(const Candidate& a, const Candidate& b) const { return path_less(b.path, a.path); }
};

}  // namespace

EnumerationResult enumerate_paths(const Network& net, const Commodity& commodity, std::size_t cap) {
  EnumerationResult result;
  if (cap == 0) return result;

  auto first = shortest_path(net, commodity.origin, commodity.destination, TollRegime::zero());
  if (!first) return result;

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateGreater> pool;
  pool.push(Candidate{std::move(first->path), commodity.origin, {}});

  while (!pool.empty() && result.paths.size() < cap) {
    Candidate current = pool.top();
    pool.pop();
    result.paths.push_back(current.path);
    if (current.path.toll_free()) {
      result.stopped_at_tollfree = true;
      break;
    }

    const std::vector<NodeId> nodes = path_nodes(net, current.path);
    std::size_t spur_pos = static_cast<std::size_t>(
        std::find(nodes.begin(), nodes.end(), current.spur) - nodes.begin());

    std::size_t hat = spur_pos;  // position of the current spur node on the path
    for (std::size_t pos = spur_pos; pos < current.path.arcs.size(); ++pos) {
      const ArcId a_i = current.path.arcs[pos];
      if (!net.arc(a_i).tolled) continue;

      ExclusionSet excluded;
      for (std::size_t n = 0; n < hat; ++n) excluded.exclude_node(nodes[n]);
      std::vector<ArcId> child_excluded = current.excluded;
      child_excluded.insert(std::lower_bound(child_excluded.begin(), child_excluded.end(), a_i), a_i);
      for (ArcId r : child_excluded) excluded.exclude_arc(r);

      const NodeId spur_node = nodes[hat];
      if (auto tail = shortest_path(net, spur_node, commodity.destination, TollRegime::zero(), excluded)) {
        std::vector<ArcId> arcs(current.path.arcs.begin(), current.path.arcs.begin() + static_cast<long>(hat));
        arcs.insert(arcs.end(), tail->path.arcs.begin(), tail->path.arcs.end());
        pool.push(Candidate{make_path(net, std::move(arcs)), spur_node, std::move(child_excluded)});
      }
      hat = pos + 1;  // next spur node is the head of a_i
    }
  }
  return result;
}

BilevelFeasibleSet dominance_filter(std::span<const Path> paths, bool exhaustive, int commodity) {
  for (std::size_t i = 1; i < paths.size(); ++i)
    if (!(paths[i - 1].base_cost < paths[i].base_cost))
      throw std::invalid_argument("dominance_filter needs paths in strictly increasing base cost");

  BilevelFeasibleSet set;
  set.commodity = commodity;
  set.exhaustive = exhaustive;
  std::vector<std::vector<ArcId>> kept_tolled;
  for (const Path& q : paths) {
    auto tq = sorted_tolled(q);
    bool dominated = false;
    for (const auto& tp : kept_tolled) {
      if (std::includes(tq.begin(), tq.end(), tp.begin(), tp.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      set.paths.push_back(q);
      kept_tolled.push_back(std::move(tq));
    }
  }
  return set;
}

BilevelFeasibleSet bilevel_feasible_paths(const Network& net, const Commodity& commodity, int index,
                                          std::size_t cap) {
  EnumerationResult e = enumerate_paths(net, commodity, cap);
  return dominance_filter(e.paths, e.stopped_at_tollfree, index);
}

bool is_bilevel_feasible(const Network& net, const Commodity& commodity, const Path& path) {
  if (path.arcs.empty()) return false;
  if (net.arc(path.arcs.front()).tail != commodity.origin || net.arc(path.arcs.back()).head != commodity.destination)
    return false;
  ExclusionSet excluded;
  auto own = sorted_tolled(path);
  for (ArcId a : net.tolled_arcs())
    if (!std::binary_search(own.begin(), own.end(), a)) excluded.exclude_arc(a);
  auto best = shortest_path(net, commodity.origin, commodity.destination, TollRegime::zero(), excluded);
  return best && best->cost == path.base_cost;
}

}  // namespace netprice
