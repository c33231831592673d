#pragma once

#include <optional>
#include <vector>

#include "netprice/enumeration.hpp"
#include "netprice/network.hpp"
#include "netprice/path.hpp"

namespace netprice {

/// A per-commodity graph derived from the original network. Every reduced
/// arc remembers the original arcs it stands for; a tolled reduced arc always
/// stands for exactly one original tolled arc.
struct ReducedGraph {
  Network network;
  std::vector<std::vector<ArcId>> arc_origin;  // reduced arc -> original arcs, in path order
  std::vector<NodeId> node_origin;             // reduced node -> original node
  NodeId origin = 0;                           // commodity endpoints, reduced ids
  NodeId destination = 0;

  /// Original tolled arc behind a tolled reduced arc.
  ArcId original_tolled(ArcId reduced) const { return arc_origin[static_cast<std::size_t>(reduced)].front(); }

  /// Reduced arc sequence of an original path, or nullopt if the path leaves
  /// the reduced graph.
  std::optional<std::vector<ArcId>> project(const Path& original) const;

  /// Expands a reduced arc sequence into the original arcs.
  std::vector<ArcId> lift(const std::vector<ArcId>& reduced_arcs) const;
};

/// The original network viewed as a reduced graph (identity maps).
ReducedGraph identity_graph(const Network& net, const Commodity& commodity);

/// Keeps exactly the arcs and nodes used by the bilevel-feasible paths, then
/// replaces toll-free chains through pass-through nodes by single arcs.
/// Throws std::invalid_argument when the set is not exhaustive.
ReducedGraph path_based_reduce(const Network& net, const Commodity& commodity, const BilevelFeasibleSet& paths);

/// Shortest-path graph model: eliminates every node that touches no tolled
/// arc (other than the commodity endpoints), joining each in/out arc pair by
/// a toll-free shortcut and keeping only the cheapest parallel shortcut.
ReducedGraph spgm_transform(const Network& net, const Commodity& commodity);

/// SPGM applied on top of an already reduced graph.
ReducedGraph spgm_transform(const ReducedGraph& graph);

struct GraphCounts {
  int nodes = 0;
  int arcs = 0;
  int tolled = 0;
};
GraphCounts counts(const Network& net);

}  // namespace netprice
