#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netprice/network.hpp"

namespace netprice {

struct Topology {
  enum class Kind { Grid, Delaunay, Voronoi } kind = Kind::Grid;
  int rows = 5;
  int cols = 12;
  int points = 0;  // Delaunay / Voronoi sites
};

/// `grid:RxC`, `delaunay:N` or `voronoi:N`. Throws std::invalid_argument.
Topology parse_topology(std::string_view text);
std::string to_string(const Topology& topology);

struct GenConfig {
  Topology topology;
  int num_commodities = 30;
  double toll_ratio = 0.20;
  int cost_low = 5;
  int cost_high = 35;
  double high_cost_fraction = 0.20;
  int demand_low = 1;
  int demand_high = 100;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument when a field is out of range.
void validate_config(const GenConfig& config);

/// Random instance: symmetric arc pairs on the topology, integer costs
/// (high_cost_fraction of the pairs at cost_high, the rest uniform), distinct
/// O-D pairs at hop distance >= 2, then toll conversion. Two thirds of the
/// tolled pairs are the pairs most used by the commodities' shortest paths,
/// the rest are random; a conversion that would leave a commodity without a
/// toll-free path is skipped. Tolled costs are halved. A shortfall is noted
/// in the label.
ProblemInstance generate(const GenConfig& config);

struct Point {
  double x = 0;
  double y = 0;
};

struct Triangulation {
  std::vector<Point> points;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<std::pair<int, int>> edges;     // i < j, sorted
};

/// Bowyer-Watson triangulation with an exact in-circle test; cocircular
/// points are kept out of the cavity, which picks one valid triangulation.
Triangulation delaunay(const std::vector<Point>& points);

/// n points uniform in the unit square, triangulated.
Triangulation delaunay_points(int n, std::uint64_t seed);

/// Dual graph: one node per triangle, an edge per shared triangle side.
std::vector<std::pair<int, int>> voronoi_edges(const Triangulation& t);

}  // namespace netprice
