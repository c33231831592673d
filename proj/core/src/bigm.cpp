#include "netprice/bigm.hpp"

#include <algorithm>
#include <string>

namespace netprice {

namespace {

Rational clamp_nonnegative(const Rational& value) { return value < 0 ? Rational(0) : value; }

std::optional<Rational> scaled_opt(const std::optional<Rational>& v, const Rational& factor) {
  if (!v) return std::nullopt;
  return Rational(*v * factor);
}

}  // namespace

BigMParams BigMParams::scaled(const Rational& factor) const {
  BigMParams out = *this;
  for (auto& n : out.toll_cap) n *= factor;
  for (auto& row : out.revenue_cap)
    for (auto& m : row) m *= factor;
  for (auto& row : out.path_slack)
    for (auto& s : row) s *= factor;
  for (auto& row : out.arc_slack)
    for (auto& r : row) r = scaled_opt(r, factor);
  return out;
}

BigMParams compute_bigm(const Network& net, std::span<const Commodity> commodities,
                        std::span<const BilevelFeasibleSet> paths) {
  const std::size_t K = commodities.size();
  BigMParams bigm;
  bigm.lower_cost.resize(K);
  bigm.tollfree_cost.resize(K);
  bigm.lambda_lo.resize(K);

  Rational cap(0);
  for (std::size_t k = 0; k < K; ++k) {
    const Commodity& c = commodities[k];
    bigm.lambda_lo[k] = distances_to(net, c.destination, TollRegime::zero());
    const auto& lo = bigm.lambda_lo[k][static_cast<std::size_t>(c.origin)];
    DistanceMap free = distances_to(net, c.destination, TollRegime::infinite());
    const auto& pi = free[static_cast<std::size_t>(c.origin)];
    if (!lo || !pi) throw BigMError("commodity " + std::to_string(k) + " has no toll-free path");
    bigm.lower_cost[k] = *lo;
    bigm.tollfree_cost[k] = *pi;
    cap = std::max(cap, clamp_nonnegative(*pi - *lo));
  }

  bigm.toll_cap.assign(static_cast<std::size_t>(net.num_arcs()), Rational(0));
  for (const Arc& a : net.arcs())
    if (a.tolled) bigm.toll_cap[static_cast<std::size_t>(a.id)] = cap;

  bigm.revenue_cap.resize(K);
  bigm.lambda_hi.resize(K);
  bigm.arc_slack.resize(K);
  bigm.path_slack.resize(K);
  const TollRegime capped = TollRegime::capped(bigm.toll_cap);
  for (std::size_t k = 0; k < K; ++k) {
    const Rational gap = clamp_nonnegative(bigm.tollfree_cost[k] - bigm.lower_cost[k]);
    bigm.revenue_cap[k].assign(static_cast<std::size_t>(net.num_arcs()), Rational(0));
    for (const Arc& a : net.arcs())
      if (a.tolled) bigm.revenue_cap[k][static_cast<std::size_t>(a.id)] = std::min(bigm.toll_cap[static_cast<std::size_t>(a.id)], gap);

    bigm.lambda_hi[k] = distances_to(net, commodities[k].destination, capped);
    bigm.arc_slack[k].resize(static_cast<std::size_t>(net.num_arcs()));
    for (const Arc& a : net.arcs()) {
      const auto& lo = bigm.lambda_lo[k][static_cast<std::size_t>(a.tail)];
      const auto& hi = bigm.lambda_hi[k][static_cast<std::size_t>(a.head)];
      if (!lo || !hi) continue;
      Rational r = a.cost - *lo + *hi;
      if (a.tolled) r += bigm.toll_cap[static_cast<std::size_t>(a.id)];
      bigm.arc_slack[k][static_cast<std::size_t>(a.id)] = r;
    }
  }

  for (const BilevelFeasibleSet& set : paths) {
    auto k = static_cast<std::size_t>(set.commodity);
    if (k >= K || !set.exhaustive) continue;
    bigm.path_slack[k].clear();
    for (const Path& p : set.paths) bigm.path_slack[k].push_back(path_slack(p, bigm, set.commodity));
  }
  return bigm;
}

Rational path_slack(const Path& path, const BigMParams& bigm, int commodity) {
  Rational s = path.base_cost - bigm.lower_cost.at(static_cast<std::size_t>(commodity));
  for (ArcId a : path.tolled) s += bigm.toll_cap.at(static_cast<std::size_t>(a));
  return s;
}

std::vector<Rational> block_caps(const ReducedGraph& graph, const BigMParams& bigm) {
  std::vector<Rational> caps(static_cast<std::size_t>(graph.network.num_arcs()), Rational(0));
  for (const Arc& a : graph.network.arcs())
    if (a.tolled) caps[static_cast<std::size_t>(a.id)] = bigm.toll_cap.at(static_cast<std::size_t>(graph.original_tolled(a.id)));
  return caps;
}

BlockDualBounds compute_block_bounds(const ReducedGraph& graph, const BigMParams& bigm) {
  const Network& net = graph.network;
  std::vector<Rational> caps = block_caps(graph, bigm);
  BlockDualBounds b;
  b.lambda_lo = distances_to(net, graph.destination, TollRegime::zero());
  b.lambda_hi = distances_to(net, graph.destination, TollRegime::capped(caps));
  b.arc_slack.resize(static_cast<std::size_t>(net.num_arcs()));
  for (const Arc& a : net.arcs()) {
    const auto& lo = b.lambda_lo[static_cast<std::size_t>(a.tail)];
    const auto& hi = b.lambda_hi[static_cast<std::size_t>(a.head)];
    if (!lo || !hi) {
      const auto& origin = graph.arc_origin[static_cast<std::size_t>(a.id)];
      throw BigMError("arc " + std::to_string(origin.front()) +
                      " has an endpoint disconnected from the destination; its R bound is infinite");
    }
    Rational r = a.cost - *lo + *hi;
    if (a.tolled) r += caps[static_cast<std::size_t>(a.id)];
    b.arc_slack[static_cast<std::size_t>(a.id)] = r;
  }
  return b;
}

}  // namespace netprice
