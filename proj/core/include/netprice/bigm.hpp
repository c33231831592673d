#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "netprice/enumeration.hpp"
#include "netprice/network.hpp"
#include "netprice/preprocess.hpp"
#include "netprice/shortest_path.hpp"

namespace netprice {

class BigMError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Big-M parameters of the linearized reformulations.
///
/// toll_cap (N_a) bounds every toll: N_a = max_k max(0, cost(pi^k) - L^k),
/// where pi^k is the cheapest toll-free path and L^k the cheapest path at
/// zero tolls. A larger toll prices every path through the arc above each
/// commodity's toll-free fallback. revenue_cap (M_a^k) is the same gap for a
/// single commodity. arc_slack (R_a^k) and path_slack (S_p^k) bound the
/// complementary-slackness residuals.
struct BigMParams {
  std::vector<Rational> toll_cap;                                 // [arc], tolled arcs only
  std::vector<std::vector<Rational>> revenue_cap;                 // [k][arc]
  std::vector<Rational> lower_cost;                               // L^k
  std::vector<Rational> tollfree_cost;                            // cost(pi^k)
  std::vector<std::vector<Rational>> path_slack;                  // [k][path], empty without a path set
  std::vector<DistanceMap> lambda_lo;                             // [k][node], zero tolls
  std::vector<DistanceMap> lambda_hi;                             // [k][node], capped tolls
  std::vector<std::vector<std::optional<Rational>>> arc_slack;    // [k][arc]

  /// Every parameter multiplied by `factor` (>= 1 keeps them valid).
  BigMParams scaled(const Rational& factor) const;
};

/// Computes all big-M families on the original network. `paths` may be empty
/// or hold one set per commodity; S is filled for commodities whose set is
/// exhaustive.
BigMParams compute_bigm(const Network& net, std::span<const Commodity> commodities,
                        std::span<const BilevelFeasibleSet> paths = {});

/// S_p^k = base(p) + sum of N over the tolled arcs of p - L^k.
Rational path_slack(const Path& path, const BigMParams& bigm, int commodity);

/// Dual bounds of one commodity block, computed on the block's own graph.
struct BlockDualBounds {
  DistanceMap lambda_lo;                       // [block node]
  DistanceMap lambda_hi;                       // [block node]
  std::vector<Rational> arc_slack;             // R per block arc
};

/// R for every arc of `graph`; throws BigMError naming the arc when an
/// endpoint cannot reach the destination under the capped regime.
BlockDualBounds compute_block_bounds(const ReducedGraph& graph, const BigMParams& bigm);

/// Toll caps of the original network mapped onto a reduced graph's arcs.
std::vector<Rational> block_caps(const ReducedGraph& graph, const BigMParams& bigm);

}  // namespace netprice
