#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "netprice/network.hpp"
#include "netprice/path.hpp"

namespace netprice {

/// Sentinel for an unbounded enumeration cap.
inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

/// Adds an i.i.d. draw from (0, magnitude] to every arc cost. Reversed twin
/// arcs (same endpoints swapped, same cost and toll status) share one draw.
/// Throws std::invalid_argument when magnitude <= 0.
Network perturb_costs(const Network& net, const Rational& magnitude, std::uint64_t seed);

/// Default perturbation magnitude: 1e-9 times the smallest arc cost.
Rational default_perturbation(const Network& net);

struct EnumerationResult {
  std::vector<Path> paths;          // emission order, nondecreasing base cost
  bool stopped_at_tollfree = false;  // true iff the last path is toll-free
};

/// Lawler-style enumeration of candidate bilevel-feasible paths in order of
/// base cost. Each emitted path spawns one child per tolled arc after its spur
/// node; a child excludes that arc plus the inherited excluded set, removes
/// the nodes before the spur node, and completes with a shortest spur path.
/// Stops after the first toll-free path or `cap` emissions.
EnumerationResult enumerate_paths(const Network& net, const Commodity& commodity, std::size_t cap = kNoCap);

struct BilevelFeasibleSet {
  int commodity = 0;
  std::vector<Path> paths;  // ascending base cost
  bool exhaustive = false;  // last path is the shortest toll-free path

  std::size_t size() const { return paths.size(); }
};

/// Removes every path q for which an earlier path p has tolled(p) within
/// tolled(q) and a strictly smaller base cost. Input must be strictly
/// increasing in base cost (std::invalid_argument otherwise).
BilevelFeasibleSet dominance_filter(std::span<const Path> paths, bool exhaustive = false, int commodity = 0);

/// Enumeration followed by the dominance pass.
BilevelFeasibleSet bilevel_feasible_paths(const Network& net, const Commodity& commodity, int index,
                                          std::size_t cap = kNoCap);

/// Witness check: the path is a cheapest origin-destination path when its own
/// tolled arcs are free and every other tolled arc is removed.
bool is_bilevel_feasible(const Network& net, const Commodity& commodity, const Path& path);

}  // namespace netprice
