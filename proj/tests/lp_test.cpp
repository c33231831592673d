#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netprice/exact_lp.hpp"
#include "netprice/lp.hpp"

using namespace netprice;

namespace {

LpData make_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b, const std::vector<double>& c) {
  LpData lp;
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  lp.A = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) lp.A(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  lp.c = c;
  lp.col_lo.assign(static_cast<std::size_t>(n), 0.0);
  lp.col_hi.assign(static_cast<std::size_t>(n), kInf);
  lp.row_lo.assign(static_cast<std::size_t>(m), -kInf);
  lp.row_hi = b;
  lp.integer.assign(static_cast<std::size_t>(n), 0);
  return lp;
}

}  // namespace

TEST(DualSimplex, TextbookLp) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
  auto lp = make_lp({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  DualSimplex s(lp);
  ASSERT_EQ(s.solve(), LpStatus::Optimal);
  EXPECT_NEAR(s.objective(), 36.0, 1e-9);
  auto x = s.primal();
  EXPECT_NEAR(x[0], 2.0, 1e-9);
  EXPECT_NEAR(x[1], 6.0, 1e-9);
}

TEST(DualSimplex, InfeasibleAndUnbounded) {
  auto bad = make_lp({{1, 1}, {-1, -1}}, {1, -2}, {1, 1});
  EXPECT_EQ(DualSimplex(bad).solve(), LpStatus::Infeasible);
  auto open = make_lp({{1, -1}}, {1}, {1, 1});
  EXPECT_EQ(DualSimplex(open).solve(), LpStatus::Unbounded);
}

TEST(DualSimplex, BoundChangesKeepWarmStart) {
  auto lp = make_lp({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  DualSimplex s(lp);
  ASSERT_EQ(s.solve(), LpStatus::Optimal);
  s.set_bounds(1, 0, 3);
  ASSERT_EQ(s.solve(), LpStatus::Optimal);
  EXPECT_NEAR(s.objective(), 27.0, 1e-9);  // x = 4, y = 3
  s.set_bounds(1, 0, kInf);
  ASSERT_EQ(s.solve(), LpStatus::Optimal);
  EXPECT_NEAR(s.objective(), 36.0, 1e-9);
}

// The exact rational simplex is the reference for the floating-point one.
TEST(DualSimplex, MatchesExactSimplexOnRandomLps) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-5, 9);
  std::uniform_int_distribution<int> rhs(-3, 20);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 6;
    const int n = 2 + (trial / 3) % 6;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(m + 1), std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<std::vector<Rational>> ea(a.size(), std::vector<Rational>(static_cast<std::size_t>(n)));
    std::vector<double> b;
    std::vector<Rational> eb;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        int v = coef(rng);
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        ea[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
      int r = rhs(rng);
      b.push_back(r);
      eb.emplace_back(r);
    }
    // Bounding row keeps every instance bounded.
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = 1;
      ea[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = 1;
    }
    b.push_back(50);
    eb.emplace_back(50);
    std::vector<double> c;
    std::vector<Rational> ec;
    for (int j = 0; j < n; ++j) {
      int v = coef(rng);
      c.push_back(v);
      ec.emplace_back(v);
    }
    auto exact = solve_exact_lp(ea, eb, ec);
    DualSimplex s(make_lp(a, b, c));
    auto st = s.solve();
    if (exact.status == ExactLpResult::Status::Infeasible) {
      EXPECT_EQ(st, LpStatus::Infeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(exact.status, ExactLpResult::Status::Optimal);
    ASSERT_EQ(st, LpStatus::Optimal) << "trial " << trial;
    EXPECT_NEAR(s.objective(), exact.objective.get_d(), 1e-7) << "trial " << trial;
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(Milp, KnapsackMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(1, 20);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 9;
    std::vector<std::vector<double>> a(2, std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      a[0][static_cast<std::size_t>(j)] = w(rng);
      a[1][static_cast<std::size_t>(j)] = w(rng);
      c[static_cast<std::size_t>(j)] = w(rng);
    }
    std::vector<double> b{static_cast<double>(5 * n), static_cast<double>(4 * n)};
    double best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double l0 = 0, l1 = 0, v = 0;
      for (int j = 0; j < n; ++j) {
        if (!(mask >> j & 1)) continue;
        l0 += a[0][static_cast<std::size_t>(j)];
        l1 += a[1][static_cast<std::size_t>(j)];
        v += c[static_cast<std::size_t>(j)];
      }
      if (l0 <= b[0] && l1 <= b[1]) best = std::max(best, v);
    }
    auto lp = make_lp(a, b, c);
    lp.col_hi.assign(static_cast<std::size_t>(n), 1.0);
    lp.integer.assign(static_cast<std::size_t>(n), 1);
    auto r = solve_milp(lp);
    ASSERT_EQ(r.status, MilpResult::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, best, 1e-6) << "trial " << trial;
    for (double x : r.x) EXPECT_NEAR(x, std::round(x), 1e-6);
    EXPECT_NEAR(r.best_bound, best, 1e-6);
  }
}

TEST(Milp, GeneralIntegerMatchesBruteForce) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> coef(1, 9);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> a(2, std::vector<double>(3));
    std::vector<double> c(3);
    for (int j = 0; j < 3; ++j) {
      a[0][static_cast<std::size_t>(j)] = coef(rng);
      a[1][static_cast<std::size_t>(j)] = coef(rng);
      c[static_cast<std::size_t>(j)] = coef(rng) + 0.5;
    }
    std::vector<double> b{static_cast<double>(coef(rng) * 3), static_cast<double>(coef(rng) * 3)};
    double best = -1;
    for (int x = 0; x <= 30; ++x)
      for (int y = 0; y <= 30; ++y)
        for (int z = 0; z <= 30; ++z) {
          if (a[0][0] * x + a[0][1] * y + a[0][2] * z > b[0]) continue;
          if (a[1][0] * x + a[1][1] * y + a[1][2] * z > b[1]) continue;
          best = std::max(best, c[0] * x + c[1] * y + c[2] * z);
        }
    auto lp = make_lp(a, b, c);
    lp.integer.assign(3, 1);
    auto r = solve_milp(lp);
    ASSERT_EQ(r.status, MilpResult::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, best, 1e-6) << "trial " << trial;
  }
}

TEST(Milp, InfeasibleAndTimeLimit) {
  // 2x = 1 with x integer.
  LpData lp = make_lp({{2}}, {1}, {1});
  lp.row_lo = {1};
  lp.integer = {1};
  EXPECT_EQ(solve_milp(lp).status, MilpResult::Status::Infeasible);

  auto k = make_lp({{3, 5, 7}}, {10}, {4, 6, 9});
  k.integer.assign(3, 1);
  MilpOptions opt;
  opt.time_limit = 0.0;
  auto r = solve_milp(k, opt);
  EXPECT_EQ(r.status, MilpResult::Status::TimeLimit);
  EXPECT_FALSE(r.has_solution);
}
