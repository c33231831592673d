#include <gtest/gtest.h>

#include <random>

#include "netprice/enumeration.hpp"
#include "netprice/shortest_path.hpp"
#include "support.hpp"

using namespace netprice;
using namespace testing_support;

namespace {

std::vector<std::vector<ArcId>> arc_lists(const std::vector<Path>& paths) {
  std::vector<std::vector<ArcId>> out;
  for (const Path& p : paths) out.push_back(p.arcs);
  return out;
}

std::vector<Rational> costs(const std::vector<Path>& paths) {
  std::vector<Rational> out;
  for (const Path& p : paths) out.push_back(p.base_cost);
  return out;
}

const std::vector<ArcId> kOUVD{OU, UV, VD};
const std::vector<ArcId> kOUD{OU, UD};
const std::vector<ArcId> kOUVWD{OU, UV, VW, WD};
const std::vector<ArcId> kOD{OD};

}  // namespace

TEST(Enumeration, Figure1EmitsFourPathsInCostOrder) {
  auto inst = figure1();
  auto r = enumerate_paths(inst.network, inst.commodities[0], 100);
  EXPECT_EQ(arc_lists(r.paths), (std::vector<std::vector<ArcId>>{kOUVD, kOUD, kOUVWD, kOD}));
  EXPECT_EQ(costs(r.paths), (std::vector<Rational>{3, 4, 6, 10}));
  EXPECT_TRUE(r.stopped_at_tollfree);
}

TEST(Enumeration, Figure1CapTwo) {
  auto inst = figure1();
  auto r = enumerate_paths(inst.network, inst.commodities[0], 2);
  EXPECT_EQ(arc_lists(r.paths), (std::vector<std::vector<ArcId>>{kOUVD, kOUD}));
  EXPECT_FALSE(r.stopped_at_tollfree);
}

TEST(Enumeration, Figure1DominanceLeavesThree) {
  auto inst = figure1();
  auto r = enumerate_paths(inst.network, inst.commodities[0]);
  auto set = dominance_filter(r.paths, r.stopped_at_tollfree);
  EXPECT_EQ(arc_lists(set.paths), (std::vector<std::vector<ArcId>>{kOUVD, kOUD, kOD}));
  EXPECT_TRUE(set.exhaustive);
  EXPECT_EQ(set.paths.back().tolled.size(), 0u);
}

TEST(Enumeration, TollFreeShortestStopsImmediately) {
  auto inst = parse_instance("npp 3 3 1\narc 0 2 1 F\narc 0 1 1 T\narc 1 2 1 T\ncommodity 0 2 1\n");
  auto r = enumerate_paths(inst.network, inst.commodities[0]);
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_TRUE(r.stopped_at_tollfree);
  EXPECT_TRUE(r.paths[0].toll_free());
}

TEST(Enumeration, DominanceFilterSmallCases) {
  auto inst = parse_instance(
      "npp 4 6 1\narc 0 3 9 F\narc 0 1 1 T\narc 1 3 1 F\narc 0 2 2 T\narc 2 3 1 F\narc 1 2 5 F\ncommodity 0 3 1\n");
  const Network& net = inst.network;
  Path tollfree = make_path(net, {0});
  auto one = dominance_filter(std::vector<Path>{tollfree}, true);
  EXPECT_EQ(one.size(), 1u);
  // Disjoint tolled sets, distinct costs: both survive.
  Path a = make_path(net, {1, 2});
  Path b = make_path(net, {3, 4});
  auto both = dominance_filter(std::vector<Path>{a, b});
  EXPECT_EQ(both.size(), 2u);
  // Same tolled set {1}, higher cost: dominated.
  Path c = make_path(net, {1, 5, 4});
  auto filtered = dominance_filter(std::vector<Path>{a, b, c});
  EXPECT_EQ(filtered.size(), 2u);
}

TEST(Enumeration, DominanceRejectsUnsortedInput) {
  auto inst = figure1();
  Path p = make_path(inst.network, kOD);
  Path q = make_path(inst.network, kOUVD);
  EXPECT_THROW(dominance_filter(std::vector<Path>{p, q}), std::invalid_argument);
  EXPECT_THROW(dominance_filter(std::vector<Path>{q, q}), std::invalid_argument);
}

TEST(Enumeration, WitnessCheck) {
  auto inst = figure1();
  const auto& c = inst.commodities[0];
  EXPECT_TRUE(is_bilevel_feasible(inst.network, c, make_path(inst.network, kOUD)));
  EXPECT_TRUE(is_bilevel_feasible(inst.network, c, make_path(inst.network, kOUVD)));
  EXPECT_TRUE(is_bilevel_feasible(inst.network, c, make_path(inst.network, kOD)));
  EXPECT_FALSE(is_bilevel_feasible(inst.network, c, make_path(inst.network, kOUVWD)));
}

TEST(Enumeration, PerturbationProperties) {
  auto inst = figure1();
  EXPECT_THROW(perturb_costs(inst.network, Rational(0), 1), std::invalid_argument);
  const Rational eps(1, 1000000);
  Network p = perturb_costs(inst.network, eps, 42);
  for (ArcId a = 0; a < p.num_arcs(); ++a) {
    EXPECT_GT(p.arc(a).cost, inst.network.arc(a).cost);
    EXPECT_LE(p.arc(a).cost - inst.network.arc(a).cost, eps);
    EXPECT_EQ(p.arc(a).tolled, inst.network.arc(a).tolled);
  }
  auto before = enumerate_paths(inst.network, inst.commodities[0]);
  auto after = enumerate_paths(p, inst.commodities[0]);
  EXPECT_EQ(arc_lists(before.paths), arc_lists(after.paths));
  EXPECT_EQ(perturb_costs(inst.network, eps, 42), p);
  EXPECT_NE(perturb_costs(inst.network, eps, 43), p);
}

TEST(Enumeration, PerturbationSharesDrawAcrossTwins) {
  auto inst = parse_instance("npp 3 4 0\narc 0 1 5 F\narc 1 0 5 F\narc 1 2 3 T\narc 2 1 3 T\n");
  Network p = perturb_costs(inst.network, Rational(1, 1000), 3);
  EXPECT_EQ(p.arc(0).cost, p.arc(1).cost);
  EXPECT_EQ(p.arc(2).cost, p.arc(3).cost);
  EXPECT_NE(p.arc(0).cost - 5, p.arc(2).cost - 3);
}

TEST(Enumeration, PerturbationBreaksTies) {
  // Two toll-free routes of equal cost plus a tolled one.
  auto inst = parse_instance(
      "npp 4 5 1\narc 0 1 2 F\narc 1 3 2 F\narc 0 2 2 F\narc 2 3 2 F\narc 0 3 1 T\ncommodity 0 3 1\n");
  Network p = perturb_costs(inst.network, default_perturbation(inst.network), 9);
  auto r = enumerate_paths(p, inst.commodities[0]);
  for (std::size_t i = 1; i < r.paths.size(); ++i) EXPECT_LT(r.paths[i - 1].base_cost, r.paths[i].base_cost);
  EXPECT_NO_THROW(dominance_filter(r.paths, r.stopped_at_tollfree));
}

// Exhaustive DFS plus the subset rule is the reference for enumeration.
TEST(Enumeration, MatchesExhaustiveSearchOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int nodes = 5 + trial % 8;
    auto inst = random_instance(rng, nodes, nodes * 2, 2);
    for (std::size_t k = 0; k < inst.commodities.size(); ++k) {
      const Commodity& c = inst.commodities[k];
      auto r = enumerate_paths(inst.network, c);
      ASSERT_TRUE(r.stopped_at_tollfree);
      for (std::size_t i = 1; i < r.paths.size(); ++i)
        ASSERT_LE(r.paths[i - 1].base_cost, r.paths[i].base_cost) << "emission order, trial " << trial;
      std::set<std::vector<ArcId>> emitted;
      for (const Path& p : r.paths) ASSERT_TRUE(emitted.insert(p.arcs).second) << "path emitted twice";

      auto set = dominance_filter(r.paths, true, static_cast<int>(k));
      std::set<std::vector<ArcId>> got;
      for (const Path& p : set.paths) got.insert(p.arcs);
      auto expected = undominated(inst.network, all_simple_paths(inst.network, c.origin, c.destination));
      ASSERT_EQ(got, expected) << "trial " << trial << " commodity " << k;

      std::set<std::vector<ArcId>> tolled_sets;
      for (const Path& p : set.paths) {
        EXPECT_TRUE(is_bilevel_feasible(inst.network, c, p));
        EXPECT_TRUE(tolled_sets.insert(tolled_sorted(inst.network, p.arcs)).second);
      }
      EXPECT_EQ(set.paths.back().arcs,
                shortest_path(inst.network, c.origin, c.destination, TollRegime::infinite())->path.arcs);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 160);
}

TEST(Enumeration, BilevelFeasiblePathsWithCap) {
  auto inst = figure1();
  auto capped = bilevel_feasible_paths(inst.network, inst.commodities[0], 0, 2);
  EXPECT_FALSE(capped.exhaustive);
  EXPECT_EQ(capped.size(), 2u);
  auto full = bilevel_feasible_paths(inst.network, inst.commodities[0], 0);
  EXPECT_TRUE(full.exhaustive);
  EXPECT_EQ(full.size(), 3u);
}
