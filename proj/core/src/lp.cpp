#include "netprice/lp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace netprice {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr double kMaxBox = 1e12;
constexpr int kRefactorEvery = 200;
constexpr long kBlandAfter = 20000;
constexpr int kStallLimit = 30;
constexpr long kIterationLimit = 200000;

double feas_tol(double bound) { return kPrimalTol * (1.0 + std::abs(bound)); }

}  // namespace

DualSimplex::DualSimplex(const LpData& lp) : m_(lp.rows()), n_(lp.cols()) {
  const int total = n_ + m_;
  full_.resize(m_, total);
  full_.leftCols(n_) = lp.A;
  full_.rightCols(m_) = -Eigen::MatrixXd::Identity(m_, m_);
  cost_.assign(static_cast<std::size_t>(total), 0.0);
  std::copy(lp.c.begin(), lp.c.end(), cost_.begin());
  lo_.resize(static_cast<std::size_t>(total));
  hi_.resize(static_cast<std::size_t>(total));
  for (int j = 0; j < n_; ++j) {
    lo_[static_cast<std::size_t>(j)] = lp.col_lo[static_cast<std::size_t>(j)];
    hi_[static_cast<std::size_t>(j)] = lp.col_hi[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < m_; ++i) {
    lo_[static_cast<std::size_t>(n_ + i)] = lp.row_lo[static_cast<std::size_t>(i)];
    hi_[static_cast<std::size_t>(n_ + i)] = lp.row_hi[static_cast<std::size_t>(i)];
  }
  x_.assign(static_cast<std::size_t>(total), 0.0);
  reset_basis();
}

// All-logical basis; dual feasible once the structurals sit on the bound
// their cost asks for.
void DualSimplex::reset_basis() {
  const int total = n_ + m_;
  tab_.resize(m_, total);
  tab_.leftCols(n_) = -full_.leftCols(n_);
  tab_.rightCols(m_) = Eigen::MatrixXd::Identity(m_, m_);
  d_ = cost_;
  status_.assign(static_cast<std::size_t>(total), Status::Lower);
  boxed_.assign(static_cast<std::size_t>(total), 0);
  basis_.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    basis_[static_cast<std::size_t>(i)] = n_ + i;
    status_[static_cast<std::size_t>(n_ + i)] = Status::Basic;
  }
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  since_refactor_ = 0;
  primal_dirty_ = true;
}

// Puts nonbasic column j on the bound its reduced cost asks for, boxing an
// infinite bound when needed.
void DualSimplex::place_nonbasic(int j) {
  auto u = static_cast<std::size_t>(j);
  const double lo = lo_[u];
  const double hi = hi_[u];
  boxed_[u] = 0;
  if (lo == hi) {
    status_[u] = Status::Lower;
    x_[u] = lo;
    return;
  }
  if (d_[u] > kDualTol) {
    status_[u] = Status::Upper;
    if (std::isfinite(hi)) {
      x_[u] = hi;
    } else {
      x_[u] = std::max(box_, std::isfinite(lo) ? lo + box_ : box_);
      boxed_[u] = 1;
    }
  } else if (d_[u] < -kDualTol) {
    status_[u] = Status::Lower;
    if (std::isfinite(lo)) {
      x_[u] = lo;
    } else {
      x_[u] = std::min(-box_, std::isfinite(hi) ? hi - box_ : -box_);
      boxed_[u] = 1;
    }
  } else if (std::isfinite(lo)) {
    status_[u] = Status::Lower;
    x_[u] = lo;
  } else if (std::isfinite(hi)) {
    status_[u] = Status::Upper;
    x_[u] = hi;
  } else {
    status_[u] = Status::Free;
    x_[u] = 0.0;
  }
}

void DualSimplex::set_bounds(int col, double lo, double hi) {
  auto u = static_cast<std::size_t>(col);
  lo_[u] = lo;
  hi_[u] = hi;
  if (status_[u] != Status::Basic) {
    place_nonbasic(col);
    primal_dirty_ = true;
  }
}

void DualSimplex::recompute_primal() {
  Eigen::VectorXd xn = Eigen::VectorXd::Zero(n_ + m_);
  for (int j = 0; j < n_ + m_; ++j)
    if (status_[static_cast<std::size_t>(j)] != Status::Basic) xn[j] = x_[static_cast<std::size_t>(j)];
  Eigen::VectorXd xb = -(tab_ * xn);
  for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb[i];
  primal_dirty_ = false;
}

void DualSimplex::refactor() {
  Eigen::MatrixXd B(m_, m_);
  for (int i = 0; i < m_; ++i) B.col(i) = full_.col(basis_[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (!lu.isInvertible()) {
    reset_basis();
    recompute_primal();
    return;
  }
  tab_ = lu.solve(full_);
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
  Eigen::VectorXd reduced = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n_ + m_) - tab_.transpose() * cb;
  for (int j = 0; j < n_ + m_; ++j) d_[static_cast<std::size_t>(j)] = reduced[j];
  for (int i = 0; i < m_; ++i) {
    int b = basis_[static_cast<std::size_t>(i)];
    d_[static_cast<std::size_t>(b)] = 0.0;
    tab_.col(b).setZero();
    tab_(i, b) = 1.0;
  }
  recompute_primal();
  since_refactor_ = 0;
}

void DualSimplex::pivot(int r, int q) {
  const double alpha = tab_(r, q);
  Eigen::RowVectorXd row = tab_.row(r) / alpha;
  Eigen::VectorXd col = tab_.col(q);
  col[r] = 0.0;
  tab_.noalias() -= col * row;
  tab_.row(r) = row;

  const double dq = d_[static_cast<std::size_t>(q)];
  Eigen::Map<Eigen::VectorXd> d(d_.data(), n_ + m_);
  d -= dq * row.transpose();
  d_[static_cast<std::size_t>(q)] = 0.0;

  const int leaving = basis_[static_cast<std::size_t>(r)];
  basis_[static_cast<std::size_t>(r)] = q;
  status_[static_cast<std::size_t>(q)] = Status::Basic;
  boxed_[static_cast<std::size_t>(q)] = 0;
  (void)leaving;
  ++iterations_;
  if (++since_refactor_ >= kRefactorEvery) refactor();
}

// Dual simplex iterations until primal feasible (true) or a terminal status.
bool DualSimplex::dual_phase(Clock::time_point deadline, LpStatus& status) {
  long local = 0;
  int degenerate_run = 0;
  for (;;) {
    if ((++local & 63) == 0 && Clock::now() > deadline) {
      status = LpStatus::TimeLimit;
      return false;
    }
    if (local > kIterationLimit) {
      status = LpStatus::IterationLimit;
      return false;
    }
    // Bland's rule while stalling on zero-length dual steps; it cannot cycle.
    const bool bland = degenerate_run > kStallLimit || local > kBlandAfter;

    int r = -1;
    double worst = 0.0;
    bool to_lower = true;
    for (int i = 0; i < m_; ++i) {
      auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
      double viol = 0.0;
      bool below = false;
      if (x_[b] < lo_[b] - feas_tol(lo_[b])) {
        viol = lo_[b] - x_[b];
        below = true;
      } else if (x_[b] > hi_[b] + feas_tol(hi_[b])) {
        viol = x_[b] - hi_[b];
      } else {
        continue;
      }
      if (bland) {
        if (r < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)]) {
          r = i;
          to_lower = below;
        }
      } else if (viol > worst) {
        worst = viol;
        r = i;
        to_lower = below;
      }
    }
    if (r < 0) return true;

    const double sgn = to_lower ? 1.0 : -1.0;
    // Harris two-pass ratio test.
    double bound = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      auto u = static_cast<std::size_t>(j);
      Status s = status_[u];
      if (s == Status::Basic || lo_[u] == hi_[u]) continue;
      const double a = sgn * tab_(r, j);
      bool eligible = (s == Status::Lower && a < -kPivotTol) || (s == Status::Upper && a > kPivotTol) ||
                      (s == Status::Free && std::abs(a) > kPivotTol);
      if (!eligible) continue;
      bound = std::min(bound, (std::abs(d_[u]) + kDualTol) / std::abs(a));
    }
    if (!std::isfinite(bound)) {
      status = LpStatus::Infeasible;
      return false;
    }
    int q = -1;
    double best_alpha = 0.0;
    double best_ratio = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      auto u = static_cast<std::size_t>(j);
      Status s = status_[u];
      if (s == Status::Basic || lo_[u] == hi_[u]) continue;
      const double a = sgn * tab_(r, j);
      bool eligible = (s == Status::Lower && a < -kPivotTol) || (s == Status::Upper && a > kPivotTol) ||
                      (s == Status::Free && std::abs(a) > kPivotTol);
      if (!eligible) continue;
      const double ratio = std::abs(d_[u]) / std::abs(a);
      if (ratio > bound) continue;
      if (bland) {
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && q < 0)) {
          best_ratio = ratio;
          q = j;
        }
      } else if (std::abs(a) > best_alpha) {
        best_alpha = std::abs(a);
        q = j;
      }
    }

    auto p = static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)]);
    const double target = to_lower ? lo_[p] : hi_[p];
    const double alpha = tab_(r, q);
    const double delta = (x_[p] - target) / alpha;
    auto uq = static_cast<std::size_t>(q);
    degenerate_run = std::abs(d_[uq]) <= 1e-11 ? degenerate_run + 1 : 0;
    for (int i = 0; i < m_; ++i) {
      auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
      x_[b] -= tab_(i, q) * delta;
    }
    x_[uq] += delta;
    x_[p] = target;
    status_[p] = to_lower ? Status::Lower : Status::Upper;
    pivot(r, q);
  }
}

// Moves a boxed nonbasic column with zero reduced cost back to a real bound
// (or to zero when free), pivoting it in if a basic variable blocks first.
bool DualSimplex::unbox(int j) {
  auto u = static_cast<std::size_t>(j);
  double target;
  if (status_[u] == Status::Upper)
    target = std::isfinite(lo_[u]) ? lo_[u] : 0.0;
  else
    target = std::isfinite(hi_[u]) ? hi_[u] : 0.0;
  const double delta = target - x_[u];
  double step = 1.0;
  int blocking = -1;
  bool block_lower = false;
  for (int i = 0; i < m_; ++i) {
    auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
    const double rate = -tab_(i, j) * delta;  // change of x_b over the full step
    if (std::abs(tab_(i, j)) <= kPivotTol) continue;
    if (rate < 0 && std::isfinite(lo_[b])) {
      double t = (lo_[b] - x_[b]) / rate;
      if (t < step) {
        step = std::max(t, 0.0);
        blocking = i;
        block_lower = true;
      }
    } else if (rate > 0 && std::isfinite(hi_[b])) {
      double t = (hi_[b] - x_[b]) / rate;
      if (t < step) {
        step = std::max(t, 0.0);
        blocking = i;
        block_lower = false;
      }
    }
  }
  for (int i = 0; i < m_; ++i) {
    auto b = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
    x_[b] -= tab_(i, j) * delta * step;
  }
  x_[u] += delta * step;
  boxed_[u] = 0;
  if (blocking < 0) {
    x_[u] = target;
    if (target == lo_[u])
      status_[u] = Status::Lower;
    else if (target == hi_[u])
      status_[u] = Status::Upper;
    else
      status_[u] = Status::Free;
    return true;
  }
  auto p = static_cast<std::size_t>(basis_[static_cast<std::size_t>(blocking)]);
  x_[p] = block_lower ? lo_[p] : hi_[p];
  status_[p] = block_lower ? Status::Lower : Status::Upper;
  d_[u] = 0.0;
  pivot(blocking, j);
  return true;
}

LpStatus DualSimplex::solve(Clock::time_point deadline) {
  if (primal_dirty_) recompute_primal();
  for (;;) {
    LpStatus status = LpStatus::Optimal;
    if (!dual_phase(deadline, status)) return status;

    bool grew = false;
    for (int j = 0; j < n_ + m_; ++j) {
      auto u = static_cast<std::size_t>(j);
      if (!boxed_[u] || status_[u] == Status::Basic) continue;
      if (std::abs(d_[u]) > kDualTol) {
        grew = true;
        break;
      }
    }
    if (grew) {
      if (box_ >= kMaxBox) return LpStatus::Unbounded;
      box_ *= 100.0;
      for (int j = 0; j < n_ + m_; ++j) {
        auto u = static_cast<std::size_t>(j);
        if (boxed_[u] && status_[u] != Status::Basic) place_nonbasic(j);
      }
      recompute_primal();
      continue;
    }
    bool moved = false;
    for (int j = 0; j < n_ + m_; ++j) {
      auto u = static_cast<std::size_t>(j);
      if (boxed_[u] && status_[u] != Status::Basic) {
        unbox(j);
        moved = true;
      }
    }
    if (!moved) return LpStatus::Optimal;
    // Unboxing keeps primal feasibility up to rounding; re-run to confirm.
  }
}

double DualSimplex::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return v;
}

std::vector<double> DualSimplex::primal() const { return {x_.begin(), x_.begin() + n_}; }

namespace {

struct BoundChange {
  int col;
  double lo;
  double hi;
};

struct Node {
  std::vector<BoundChange> changes;  // later entries tighten earlier ones
  double bound = kInf;
  long order = 0;
};

struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.order > b.order;
  }
};

}  // namespace

MilpResult solve_milp(const LpData& lp, const MilpOptions& options) {
  MilpResult result;
  const auto start = Clock::now();
  const auto deadline = std::isfinite(options.time_limit)
                            ? start + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(std::max(0.0, options.time_limit)))
                            : Clock::time_point::max();
  if (options.time_limit <= 0) {
    result.status = MilpResult::Status::TimeLimit;
    return result;
  }

  DualSimplex simplex(lp);
  std::vector<int> int_cols;
  for (int j = 0; j < lp.cols(); ++j)
    if (lp.integer[static_cast<std::size_t>(j)]) int_cols.push_back(j);

  auto apply = [&](const Node& node) {
    for (int j : int_cols) simplex.set_bounds(j, lp.col_lo[static_cast<std::size_t>(j)], lp.col_hi[static_cast<std::size_t>(j)]);
    for (const BoundChange& b : node.changes) simplex.set_bounds(b.col, b.lo, b.hi);
  };
  auto prune_level = [&]() {
    if (!result.has_solution) return -kInf;
    return result.objective + std::max(options.gap_tol, options.gap_tol * std::abs(result.objective));
  };

  // Depth-first until the first incumbent, best-bound after that.
  std::priority_queue<Node, std::vector<Node>, NodeWorse> open;
  std::vector<Node> stack;
  long order = 0;
  stack.push_back(Node{{}, kInf, order++});
  bool timed_out = false;
  bool unbounded = false;
  double unexplored_bound = -kInf;

  while ((!open.empty() || !stack.empty()) && !timed_out) {
    if (result.has_solution) {
      for (Node& n : stack) open.push(std::move(n));
      stack.clear();
    }
    Node current;
    if (!stack.empty()) {
      current = std::move(stack.back());
      stack.pop_back();
    } else {
      current = open.top();
      open.pop();
    }
    if (current.bound <= prune_level()) continue;

    for (;;) {
      ++result.nodes;
      apply(current);
      LpStatus st = simplex.solve(deadline);
      if (st == LpStatus::TimeLimit) {
        timed_out = true;
        unexplored_bound = std::max(unexplored_bound, current.bound);
        break;
      }
      if (st == LpStatus::Unbounded) {
        unbounded = true;
        break;
      }
      if (st == LpStatus::IterationLimit) throw std::runtime_error("simplex iteration limit reached");
      if (st == LpStatus::Infeasible) break;

      const double obj = simplex.objective();
      if (obj <= prune_level()) break;

      std::vector<double> x = simplex.primal();
      int branch = -1;
      double most = 0.0;
      for (int j : int_cols) {
        double v = x[static_cast<std::size_t>(j)];
        double frac = std::abs(v - std::round(v));
        if (frac > options.integrality_tol) {
          double score = std::min(v - std::floor(v), std::ceil(v) - v);
          if (score > most) {
            most = score;
            branch = j;
          }
        }
      }
      if (branch < 0) {
        // Polish: fix the integer columns at their rounded values and re-solve
        // so the continuous part carries no integrality slop.
        Node fixed = current;
        for (int j : int_cols) {
          const double r = std::round(x[static_cast<std::size_t>(j)]);
          fixed.changes.push_back({j, r, r});
        }
        apply(fixed);
        LpStatus polish = simplex.solve(deadline);
        double value = obj;
        if (polish == LpStatus::Optimal) {
          value = simplex.objective();
          x = simplex.primal();
        }
        for (int j : int_cols) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
        if (!result.has_solution || value > result.objective) {
          result.has_solution = true;
          result.objective = value;
          result.x = std::move(x);
        }
        break;
      }
      const double v = x[static_cast<std::size_t>(branch)];
      double lo = lp.col_lo[static_cast<std::size_t>(branch)];
      double hi = lp.col_hi[static_cast<std::size_t>(branch)];
      for (const BoundChange& b : current.changes) {
        if (b.col != branch) continue;
        lo = b.lo;
        hi = b.hi;
      }
      Node down = current;
      down.changes.push_back({branch, lo, std::floor(v)});
      down.bound = obj;
      Node up = current;
      up.changes.push_back({branch, std::ceil(v), hi});
      up.bound = obj;
      const bool go_up = v - std::floor(v) >= 0.5;
      Node& next = go_up ? up : down;
      Node& other = go_up ? down : up;
      other.order = order++;
      if (result.has_solution) {
        open.push(std::move(other));
      } else {
        stack.push_back(std::move(other));
      }
      current = std::move(next);
      if (Clock::now() > deadline) {
        timed_out = true;
        unexplored_bound = std::max(unexplored_bound, current.bound);
        break;
      }
    }
    if (unbounded) break;
  }

  result.lp_iterations = simplex.iterations();
  if (unbounded) {
    result.status = MilpResult::Status::Unbounded;
    return result;
  }
  double bound = unexplored_bound;
  for (const Node& n : stack) bound = std::max(bound, n.bound);
  while (!open.empty()) {
    if (open.top().bound > prune_level()) bound = std::max(bound, open.top().bound);
    open.pop();
  }
  if (timed_out) {
    result.status = MilpResult::Status::TimeLimit;
    result.best_bound = std::max(bound, result.objective);
    return result;
  }
  if (!result.has_solution) {
    result.status = MilpResult::Status::Infeasible;
    return result;
  }
  result.status = MilpResult::Status::Optimal;
  result.best_bound = result.objective;
  return result;
}

}  // namespace netprice
