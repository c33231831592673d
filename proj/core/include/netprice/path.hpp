#pragma once

#include <vector>

#include "netprice/network.hpp"

namespace netprice {

/// A simple directed path given by its arcs. `tolled` lists the tolled arcs
/// in order of appearance; `base_cost` is the toll-free cost sum.
struct Path {
  std::vector<ArcId> arcs;
  Rational base_cost;
  std::vector<ArcId> tolled;

  bool toll_free() const { return tolled.empty(); }
  friend bool operator==(const Path& a, const Path& b) { return a.arcs == b.arcs; }
};

/// Builds a Path from an arc sequence, checking contiguity and simplicity.
/// Throws std::invalid_argument otherwise.
Path make_path(const Network& net, std::vector<ArcId> arcs);

/// Node sequence of a path (arcs.size() + 1 nodes). Empty for an empty path.
std::vector<NodeId> path_nodes(const Network& net, const Path& path);

/// Sorted copy of the tolled-arc set.
std::vector<ArcId> sorted_tolled(const Path& path);

/// True when every tolled arc of `a` is also on `b`.
bool tolled_subset(const Path& a, const Path& b);

/// Ordering by (base cost, lexicographic arc ids).
bool path_less(const Path& a, const Path& b);

}  // namespace netprice
