#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "netprice/enumeration.hpp"

namespace netprice {

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  std::vector<Rational> tolls;  // by arc id, zero on toll-free arcs
  Rational revenue;
  std::vector<int> chosen;      // index into each commodity's path set
  std::size_t assignments = 0;  // path combinations examined
};

/// Brute-force bilevel optimum. Tries every choice of one bilevel-feasible
/// path per commodity and solves, in exact arithmetic, the LP that maximizes
/// revenue while keeping each chosen path no more expensive than every other
/// path of its commodity. Tolled arcs no chosen path uses get the largest
/// commodity gap between toll-free and zero-toll cost, which prices them out.
///
/// Throws std::invalid_argument on a non-exhaustive set and OracleLimitError
/// when the number of combinations exceeds `cap`.
OracleResult oracle_solve(const ProblemInstance& instance, std::span<const BilevelFeasibleSet> paths,
                          std::size_t cap = 1'000'000);

}  // namespace netprice
