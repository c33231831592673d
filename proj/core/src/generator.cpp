#include "netprice/generator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include "netprice/shortest_path.hpp"

namespace netprice {

Topology parse_topology(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("topology must look like grid:5x12, delaunay:N or voronoi:N");
  std::string kind(text.substr(0, colon));
  std::string arg(text.substr(colon + 1));
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("bad topology size '" + s + "'");
    return v;
  };
  Topology t;
  if (kind == "grid") {
    auto x = arg.find('x');
    if (x == std::string::npos) throw std::invalid_argument("grid topology needs RxC");
    t.kind = Topology::Kind::Grid;
    t.rows = to_int(arg.substr(0, x));
    t.cols = to_int(arg.substr(x + 1));
  } else if (kind == "delaunay" || kind == "voronoi") {
    t.kind = kind == "delaunay" ? Topology::Kind::Delaunay : Topology::Kind::Voronoi;
    t.points = to_int(arg);
  } else {
    throw std::invalid_argument("unknown topology '" + kind + "'");
  }
  return t;
}

std::string to_string(const Topology& t) {
  switch (t.kind) {
    case Topology::Kind::Grid:
      return "grid:" + std::to_string(t.rows) + "x" + std::to_string(t.cols);
    case Topology::Kind::Delaunay:
      return "delaunay:" + std::to_string(t.points);
    case Topology::Kind::Voronoi:
      return "voronoi:" + std::to_string(t.points);
  }
  return "?";
}

void validate_config(const GenConfig& c) {
  if (!(c.toll_ratio > 0 && c.toll_ratio < 1)) throw std::invalid_argument("toll_ratio must lie in (0,1)");
  if (c.topology.kind == Topology::Kind::Grid && (c.topology.rows < 1 || c.topology.cols < 1 || c.topology.rows * c.topology.cols < 4))
    throw std::invalid_argument("grid needs rows*cols >= 4");
  if (c.topology.kind != Topology::Kind::Grid && c.topology.points < 4)
    throw std::invalid_argument("delaunay and voronoi topologies need at least 4 points");
  if (c.num_commodities < 1) throw std::invalid_argument("at least one commodity required");
  if (c.cost_low < 1 || c.cost_high < c.cost_low) throw std::invalid_argument("cost range must satisfy 1 <= low <= high");
  if (!(c.high_cost_fraction >= 0 && c.high_cost_fraction <= 1)) throw std::invalid_argument("high_cost_fraction must lie in [0,1]");
  if (c.demand_low < 1 || c.demand_high < c.demand_low) throw std::invalid_argument("demand range must satisfy 1 <= low <= high");
}

namespace {

struct Skeleton {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

Skeleton skeleton(const Topology& t, std::mt19937_64& rng) {
  Skeleton s;
  switch (t.kind) {
    case Topology::Kind::Grid:
      s.nodes = t.rows * t.cols;
      for (int r = 0; r < t.rows; ++r)
        for (int c = 0; c < t.cols; ++c) {
          int id = r * t.cols + c;
          if (c + 1 < t.cols) s.edges.emplace_back(id, id + 1);
          if (r + 1 < t.rows) s.edges.emplace_back(id, id + t.cols);
        }
      break;
    case Topology::Kind::Delaunay: {
      Triangulation tri = delaunay_points(t.points, rng());
      s.nodes = t.points;
      s.edges = tri.edges;
      break;
    }
    case Topology::Kind::Voronoi: {
      Triangulation tri = delaunay_points(t.points, rng());
      s.nodes = static_cast<int>(tri.triangles.size());
      s.edges = voronoi_edges(tri);
      break;
    }
  }
  return s;
}

std::vector<int> hop_distances(const Skeleton& s, int from) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(s.nodes));
  for (auto [a, b] : s.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> dist(static_cast<std::size_t>(s.nodes), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
  }
  return dist;
}

Network build(int nodes, const std::vector<std::pair<int, int>>& edges, const std::vector<Rational>& cost,
              const std::vector<char>& tolled) {
  std::vector<Arc> arcs;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    arcs.push_back(Arc{0, a, b, cost[e], tolled[e] != 0});
    arcs.push_back(Arc{0, b, a, cost[e], tolled[e] != 0});
  }
  return Network(nodes, std::move(arcs));
}

}  // namespace

ProblemInstance generate(const GenConfig& config) {
  validate_config(config);
  std::mt19937_64 rng(config.seed);
  Skeleton s = skeleton(config.topology, rng);
  const std::size_t E = s.edges.size();
  if (E == 0) throw std::invalid_argument("topology has no edges");

  // Costs per edge (both directions share them).
  std::vector<Rational> cost(E);
  std::vector<std::size_t> order(E);
  for (std::size_t e = 0; e < E; ++e) order[e] = e;
  std::shuffle(order.begin(), order.end(), rng);
  const auto high = static_cast<std::size_t>(std::llround(config.high_cost_fraction * static_cast<double>(E)));
  std::uniform_int_distribution<int> uniform_cost(config.cost_low, config.cost_high);
  for (std::size_t i = 0; i < E; ++i) cost[order[i]] = i < high ? config.cost_high : uniform_cost(rng);

  // O-D pairs at hop distance >= 2.
  std::vector<std::pair<int, int>> candidates;
  for (int o = 0; o < s.nodes; ++o) {
    std::vector<int> dist = hop_distances(s, o);
    for (int d = 0; d < s.nodes; ++d)
      if (dist[static_cast<std::size_t>(d)] >= 2) candidates.emplace_back(o, d);
  }
  if (candidates.size() < static_cast<std::size_t>(config.num_commodities))
    throw std::invalid_argument("topology has too few O-D pairs at hop distance 2 or more");
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::uniform_int_distribution<int> uniform_demand(config.demand_low, config.demand_high);
  std::vector<Commodity> commodities;
  for (int k = 0; k < config.num_commodities; ++k) {
    auto [o, d] = candidates[static_cast<std::size_t>(k)];
    commodities.push_back(Commodity{o, d, Rational(uniform_demand(rng))});
  }

  // Shortest-path usage per edge.
  std::vector<char> tolled(E, 0);
  Network plain = build(s.nodes, s.edges, cost, tolled);
  std::vector<long> usage(E, 0);
  for (const Commodity& c : commodities) {
    auto sp = shortest_path(plain, c.origin, c.destination, TollRegime::zero());
    if (!sp) throw std::logic_error("generated topology is disconnected");
    for (ArcId a : sp->path.arcs) usage[static_cast<std::size_t>(a / 2)]++;
  }

  const auto target = static_cast<std::size_t>(std::llround(config.toll_ratio * static_cast<double>(E)));
  const std::size_t ranked_quota = (2 * target) / 3;
  std::vector<std::size_t> ranked(E);
  for (std::size_t e = 0; e < E; ++e) ranked[e] = e;
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return usage[a] > usage[b]; });

  std::size_t converted = 0;
  auto try_convert = [&](std::size_t e) {
    if (tolled[e]) return false;
    tolled[e] = 1;
    Network trial = build(s.nodes, s.edges, cost, tolled);
    for (const Commodity& c : commodities)
      if (!reachable(trial, c.origin, c.destination, true)) {
        tolled[e] = 0;
        return false;
      }
    ++converted;
    return true;
  };
  for (std::size_t i = 0; i < E && converted < ranked_quota; ++i) try_convert(ranked[i]);
  std::vector<std::size_t> rest(order);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i = 0; i < E && converted < target; ++i) try_convert(rest[i]);

  for (std::size_t e = 0; e < E; ++e)
    if (tolled[e]) cost[e] /= 2;

  ProblemInstance inst;
  inst.network = build(s.nodes, s.edges, cost, tolled);
  inst.commodities = std::move(commodities);
  inst.label = to_string(config.topology) + "-k" + std::to_string(config.num_commodities) + "-s" + std::to_string(config.seed);
  if (converted < target)
    inst.label += " warning: " + std::to_string(converted) + " of " + std::to_string(target) + " tolled pairs";
  return inst;
}

}  // namespace netprice
