#pragma once

#include <vector>

#include "netprice/rational.hpp"

namespace netprice {

struct ExactLpResult {
  enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
  std::vector<Rational> x;
  Rational objective;
};

/// Exact simplex for max c'x s.t. A x <= b, x >= 0 (dense, Bland's rule,
/// auxiliary-variable start when some b_i < 0). Meant for small LPs.
ExactLpResult solve_exact_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                             const std::vector<Rational>& c);

}  // namespace netprice
