#include <gtest/gtest.h>

#include <random>

#include "netprice/oracle.hpp"
#include "support.hpp"

using namespace netprice;
using namespace testing_support;

namespace {

std::vector<BilevelFeasibleSet> path_sets(const ProblemInstance& inst) {
  std::vector<BilevelFeasibleSet> sets;
  for (std::size_t k = 0; k < inst.commodities.size(); ++k)
    sets.push_back(bilevel_feasible_paths(inst.network, inst.commodities[k], static_cast<int>(k)));
  return sets;
}

// Leader revenue of a toll vector: every commodity takes a cheapest simple
// path, ties going to the leader.
Rational revenue_of(const ProblemInstance& inst, const std::vector<Rational>& tolls) {
  Rational total = 0;
  for (const Commodity& c : inst.commodities) {
    std::optional<Rational> best_cost;
    Rational best_rev;
    for (const auto& arcs : all_simple_paths(inst.network, c.origin, c.destination)) {
      Rational cost = path_cost(inst.network, arcs);
      Rational rev = 0;
      for (ArcId a : arcs) rev += tolls[static_cast<std::size_t>(a)];
      cost += rev;
      if (!best_cost || cost < *best_cost || (cost == *best_cost && rev > best_rev)) {
        best_cost = cost;
        best_rev = rev;
      }
    }
    total += c.demand * best_rev;
  }
  return total;
}

}  // namespace

TEST(Oracle, Figure1) {
  auto inst = figure1();
  auto sets = path_sets(inst);
  auto r = oracle_solve(inst, sets);
  EXPECT_EQ(r.revenue, Rational(7));
  EXPECT_EQ(revenue_of(inst, r.tolls), Rational(7));
  EXPECT_EQ(r.assignments, 3u);
  for (ArcId a : {VW, WD, UD, OD}) EXPECT_EQ(r.tolls[static_cast<std::size_t>(a)], 0);
}

TEST(Oracle, TollFreeShortestEarnsNothing) {
  auto inst = parse_instance("npp 3 3 1\narc 0 2 1 F\narc 0 1 1 T\narc 1 2 1 T\ncommodity 0 2 1\n");
  auto sets = path_sets(inst);
  EXPECT_EQ(oracle_solve(inst, sets).revenue, Rational(0));
}

TEST(Oracle, DemandScalesRevenue) {
  auto inst = parse_instance("npp 3 3 2\narc 0 2 9 F\narc 0 1 1 T\narc 1 2 3 F\ncommodity 0 2 2\ncommodity 0 2 3\n");
  auto sets = path_sets(inst);
  auto r = oracle_solve(inst, sets);
  EXPECT_EQ(r.revenue, Rational(25));  // toll 5 times demand 5
  EXPECT_EQ(r.tolls[1], Rational(5));
}

TEST(Oracle, LimitsAndInputChecks) {
  auto inst = figure1();
  auto sets = path_sets(inst);
  EXPECT_THROW(oracle_solve(inst, sets, 2), OracleLimitError);
  std::vector<BilevelFeasibleSet> capped{bilevel_feasible_paths(inst.network, inst.commodities[0], 0, 2)};
  EXPECT_THROW(oracle_solve(inst, capped), std::invalid_argument);
}

// The optimum is attained by its own tolls and beats random toll vectors.
TEST(Oracle, RandomInstancesAgainstFollowerResponse) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> toll(0, 40);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_instance(rng, 6, 10, 2);
    auto sets = path_sets(inst);
    auto r = oracle_solve(inst, sets);
    EXPECT_EQ(revenue_of(inst, r.tolls), r.revenue) << "trial " << trial;
    for (const Arc& a : inst.network.arcs()) {
      if (!a.tolled) {
        EXPECT_EQ(r.tolls[static_cast<std::size_t>(a.id)], 0);
      }
    }
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<Rational> t(static_cast<std::size_t>(inst.network.num_arcs()));
      for (const Arc& a : inst.network.arcs())
        if (a.tolled) t[static_cast<std::size_t>(a.id)] = Rational(toll(rng), 4);
      EXPECT_LE(revenue_of(inst, t), r.revenue) << "trial " << trial;
    }
  }
}
