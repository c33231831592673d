#pragma once

#include <optional>
#include <vector>

#include "netprice/network.hpp"
#include "netprice/path.hpp"

namespace netprice {

/// How tolled arcs are priced during a search: at base cost (zero toll), at
/// base cost plus a per-arc cap N_a, or removed entirely.
class TollRegime {
 public:
  enum class Mode { Zero, Capped, Infinite };

  static TollRegime zero() { return TollRegime(Mode::Zero, {}); }
  static TollRegime infinite() { return TollRegime(Mode::Infinite, {}); }
  /// `caps` is indexed by arc id; entries for toll-free arcs are ignored.
  static TollRegime capped(std::vector<Rational> caps) { return TollRegime(Mode::Capped, std::move(caps)); }

  Mode mode() const { return mode_; }
  /// Regime-adjusted cost, or nullopt when the arc is unusable.
  std::optional<Rational> cost(const Arc& arc) const;

 private:
  TollRegime(Mode mode, std::vector<Rational> caps) : mode_(mode), caps_(std::move(caps)) {}
  Mode mode_;
  std::vector<Rational> caps_;
};

/// Arcs and nodes ignored by a search. Excluding a node excludes its arcs.
class ExclusionSet {
 public:
  void exclude_arc(ArcId a);
  void exclude_node(NodeId i);
  bool arc_excluded(ArcId a) const { return a < static_cast<ArcId>(arcs_.size()) && arcs_[static_cast<std::size_t>(a)]; }
  bool node_excluded(NodeId i) const { return i < static_cast<NodeId>(nodes_.size()) && nodes_[static_cast<std::size_t>(i)]; }
  bool empty() const { return count_ == 0; }

 private:
  std::vector<bool> arcs_;
  std::vector<bool> nodes_;
  int count_ = 0;
};

using DistanceMap = std::vector<std::optional<Rational>>;

/// Costs of cheapest paths from every node to `destination` (one reverse
/// Dijkstra sweep). nullopt marks nodes that cannot reach it.
DistanceMap distances_to(const Network& net, NodeId destination, const TollRegime& regime,
                         const ExclusionSet& excluded = {});

struct PathResult {
  Path path;
  Rational cost;  // regime-adjusted
};

/// Cheapest simple source-to-target path. Among equal-cost paths the
/// lexicographically smallest arc-id sequence wins.
std::optional<PathResult> shortest_path(const Network& net, NodeId source, NodeId target, const TollRegime& regime,
                                        const ExclusionSet& excluded = {});

/// Plain reachability, optionally over toll-free arcs only.
bool reachable(const Network& net, NodeId source, NodeId target, bool toll_free_only = false);

}  // namespace netprice
