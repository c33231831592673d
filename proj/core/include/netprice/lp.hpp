#pragma once

#include <chrono>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace netprice {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense floating-point LP/MILP data: maximize c'x subject to
/// row_lo <= A x <= row_hi and col_lo <= x <= col_hi.
struct LpData {
  Eigen::MatrixXd A;
  std::vector<double> c;
  std::vector<double> col_lo;
  std::vector<double> col_hi;
  std::vector<double> row_lo;
  std::vector<double> row_hi;
  std::vector<char> integer;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, TimeLimit, IterationLimit };

using Clock = std::chrono::steady_clock;

/// Bounded dual simplex on a dense tableau. Bounds of structural columns can
/// be changed between solves; the last basis stays dual feasible across such
/// changes, which is what branch-and-bound relies on.
class DualSimplex {
 public:
  explicit DualSimplex(const LpData& lp);

  LpStatus solve(Clock::time_point deadline = Clock::time_point::max());

  void set_bounds(int col, double lo, double hi);
  double lower(int col) const { return lo_[static_cast<std::size_t>(col)]; }
  double upper(int col) const { return hi_[static_cast<std::size_t>(col)]; }

  double objective() const;
  std::vector<double> primal() const;  // structural columns
  long iterations() const { return iterations_; }

 private:
  enum class Status : char { Basic, Lower, Upper, Free };

  void refactor();
  void reset_basis();
  void recompute_primal();
  void pivot(int row, int col);
  void place_nonbasic(int j);
  bool dual_phase(Clock::time_point deadline, LpStatus& status);
  bool unbox(int j);

  int m_ = 0;
  int n_ = 0;
  Eigen::MatrixXd full_;  // [A | -I]
  Eigen::MatrixXd tab_;   // B^-1 [A | -I]
  std::vector<double> cost_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<Status> status_;
  std::vector<char> boxed_;
  std::vector<int> basis_;
  double box_ = 1e6;
  long iterations_ = 0;
  int since_refactor_ = 0;
  bool primal_dirty_ = true;
};

struct MilpOptions {
  double time_limit = kInf;  // seconds
  double integrality_tol = 1e-9;
  double gap_tol = 1e-9;
};

struct MilpResult {
  enum class Status { Optimal, Feasible, Infeasible, Unbounded, TimeLimit } status = Status::Infeasible;
  bool has_solution = false;
  double objective = -kInf;
  double best_bound = kInf;
  std::vector<double> x;
  long nodes = 0;
  long lp_iterations = 0;
};

/// Best-bound branch-and-bound with depth-first plunging over binary and
/// integer columns.
MilpResult solve_milp(const LpData& lp, const MilpOptions& options = {});

}  // namespace netprice
