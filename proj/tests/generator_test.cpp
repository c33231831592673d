#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "netprice/generator.hpp"
#include "support.hpp"

using namespace netprice;
using namespace testing_support;

namespace {

GenConfig grid_config(std::uint64_t seed) {
  GenConfig c;
  c.topology = parse_topology("grid:5x12");
  c.num_commodities = 30;
  c.seed = seed;
  return c;
}

long double orient(const Point& a, const Point& b, const Point& c) {
  return static_cast<long double>(b.x - a.x) * (c.y - a.y) - static_cast<long double>(b.y - a.y) * (c.x - a.x);
}

// Andrew's monotone chain; collinear hull points are dropped.
std::size_t hull_size(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  return k - 1;
}

bool in_circumcircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto row = [&](const Point& p) {
    long double dx = p.x - d.x, dy = p.y - d.y;
    return std::array<long double, 3>{dx, dy, dx * dx + dy * dy};
  };
  auto A = row(a), B = row(b), C = row(c);
  long double det = A[0] * (B[1] * C[2] - B[2] * C[1]) - A[1] * (B[0] * C[2] - B[2] * C[0]) +
                    A[2] * (B[0] * C[1] - B[1] * C[0]);
  return det > 1e-12L;
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  int parts = n;
  for (auto [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --parts;
    }
  }
  return parts == 1;
}

}  // namespace

TEST(Generator, TopologyParsing) {
  EXPECT_EQ(to_string(parse_topology("grid:5x12")), "grid:5x12");
  EXPECT_EQ(parse_topology("delaunay:144").points, 144);
  EXPECT_EQ(parse_topology("voronoi:30").kind, Topology::Kind::Voronoi);
  EXPECT_THROW(parse_topology("grid:5"), std::invalid_argument);
  EXPECT_THROW(parse_topology("hexagon:3"), std::invalid_argument);
}

TEST(Generator, ConfigErrors) {
  GenConfig c = grid_config(1);
  c.toll_ratio = 0;
  EXPECT_THROW(generate(c), std::invalid_argument);
  c = grid_config(1);
  c.toll_ratio = 1;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c = grid_config(1);
  c.num_commodities = 0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c = grid_config(1);
  c.topology = parse_topology("grid:2x2");
  c.num_commodities = 5;  // only 4 O-D pairs at two hops
  EXPECT_THROW(generate(c), std::invalid_argument);
}

TEST(Generator, DeterministicPerSeed) {
  EXPECT_EQ(generate(grid_config(3)), generate(grid_config(3)));
  EXPECT_NE(generate(grid_config(3)).network, generate(grid_config(4)).network);
}

TEST(Generator, GridInstanceProperties) {
  double high_fraction = 0;
  const int seeds = 10;
  for (int seed = 1; seed <= seeds; ++seed) {
    auto inst = generate(grid_config(static_cast<std::uint64_t>(seed)));
    const Network& net = inst.network;
    ASSERT_EQ(net.num_nodes(), 60);
    ASSERT_EQ(net.num_arcs(), 2 * 103);
    EXPECT_TRUE(validate_instance(inst).empty());
    ASSERT_EQ(inst.commodities.size(), 30u);
    int tolled_pairs = 0;
    int high = 0;
    for (ArcId a = 0; a < net.num_arcs(); a += 2) {
      const Arc& f = net.arc(a);
      const Arc& r = net.arc(a + 1);
      EXPECT_EQ(f.tail, r.head);
      EXPECT_EQ(f.head, r.tail);
      EXPECT_EQ(f.cost, r.cost);
      EXPECT_EQ(f.tolled, r.tolled);
      tolled_pairs += f.tolled;
      const Rational original = f.tolled ? f.cost * 2 : f.cost;
      EXPECT_GE(original, 5);
      EXPECT_LE(original, 35);
      high += original == 35;
    }
    if (inst.label.find("warning") == std::string::npos) {
      EXPECT_EQ(tolled_pairs, 21);
    }
    high_fraction += high / 103.0;
    std::set<std::pair<NodeId, NodeId>> od;
    for (const Commodity& c : inst.commodities) {
      EXPECT_TRUE(od.emplace(c.origin, c.destination).second);
      for (ArcId a : net.out_arcs(c.origin)) EXPECT_NE(net.arc(a).head, c.destination);
      EXPECT_GE(c.demand, 1);
      EXPECT_LE(c.demand, 100);
    }
  }
  // A fifth at the top cost, plus uniform draws that land on it.
  EXPECT_NEAR(high_fraction / seeds, 0.20 + 0.80 / 31, 0.03);
}

TEST(Generator, DelaunaySmallCases) {
  auto three = delaunay({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_EQ(three.triangles.size(), 1u);
  EXPECT_EQ(three.edges, (std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));
  auto four = delaunay({{0, 0}, {2, 0}, {2.2, 1}, {0, 1.1}});
  EXPECT_EQ(four.triangles.size(), 2u);
  EXPECT_EQ(four.edges.size(), 5u);
  for (const auto& t : four.triangles)
    EXPECT_GT(orient(four.points[static_cast<std::size_t>(t[0])], four.points[static_cast<std::size_t>(t[1])],
                     four.points[static_cast<std::size_t>(t[2])]),
              0);
}

TEST(Generator, DelaunayRandomPoints) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto t = delaunay_points(144, seed);
    const std::size_t n = t.points.size();
    const std::size_t h = hull_size(t.points);
    EXPECT_EQ(t.edges.size(), 3 * n - 3 - h);
    EXPECT_EQ(t.triangles.size(), 2 * n - 2 - h);
    EXPECT_LE(t.edges.size(), 3 * n - 6);
    EXPECT_TRUE(connected(static_cast<int>(n), t.edges));
    for (const auto& tri : t.triangles) {
      const Point& a = t.points[static_cast<std::size_t>(tri[0])];
      const Point& b = t.points[static_cast<std::size_t>(tri[1])];
      const Point& c = t.points[static_cast<std::size_t>(tri[2])];
      ASSERT_GT(orient(a, b, c), 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>(i) == tri[0] || static_cast<int>(i) == tri[1] || static_cast<int>(i) == tri[2]) continue;
        ASSERT_FALSE(in_circumcircle(a, b, c, t.points[i])) << "point " << i;
      }
    }
    auto dual = voronoi_edges(t);
    EXPECT_EQ(dual.size(), t.edges.size() - h);
    EXPECT_TRUE(connected(static_cast<int>(t.triangles.size()), dual));
    std::vector<int> degree(t.triangles.size());
    for (auto [a, b] : dual) {
      ++degree[static_cast<std::size_t>(a)];
      ++degree[static_cast<std::size_t>(b)];
    }
    EXPECT_LE(*std::max_element(degree.begin(), degree.end()), 3);
  }
}

TEST(Generator, DelaunayAndVoronoiInstances) {
  for (const char* topo : {"delaunay:40", "voronoi:40"}) {
    GenConfig c;
    c.topology = parse_topology(topo);
    c.num_commodities = 10;
    c.seed = 5;
    auto inst = generate(c);
    EXPECT_TRUE(validate_instance(inst).empty()) << topo;
    EXPECT_EQ(inst.network.num_arcs() % 2, 0);
    EXPECT_GT(inst.network.num_tolled(), 0);
  }
}
