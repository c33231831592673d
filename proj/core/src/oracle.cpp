#include "netprice/oracle.hpp"

#include <algorithm>
#include <map>

#include "netprice/exact_lp.hpp"

namespace netprice {

OracleResult oracle_solve(const ProblemInstance& instance, std::span<const BilevelFeasibleSet> paths,
                          std::size_t cap) {
  const std::size_t K = instance.commodities.size();
  if (paths.size() != K) throw std::invalid_argument("one path set per commodity required");
  std::size_t combos = 1;
  Rational unused_toll(0);
  for (const BilevelFeasibleSet& set : paths) {
    if (!set.exhaustive || set.paths.empty()) throw std::invalid_argument("oracle needs exhaustive path sets");
    if (combos > cap / set.size()) throw OracleLimitError("too many path combinations for the oracle");
    combos *= set.size();
    unused_toll = std::max(unused_toll, Rational(set.paths.back().base_cost - set.paths.front().base_cost));
  }

  OracleResult best;
  bool have = false;
  std::vector<int> choice(K, 0);
  for (std::size_t count = 0; count < combos; ++count) {
    std::map<ArcId, int> column;
    for (std::size_t k = 0; k < K; ++k)
      for (ArcId a : paths[k].paths[static_cast<std::size_t>(choice[k])].tolled) column.emplace(a, 0);
    int n = 0;
    for (auto& [arc, col] : column) col = n++;

    std::vector<Rational> c(static_cast<std::size_t>(n));
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (std::size_t k = 0; k < K; ++k) {
      const Path& p = paths[k].paths[static_cast<std::size_t>(choice[k])];
      for (ArcId a : p.tolled) c[static_cast<std::size_t>(column.at(a))] += instance.commodities[k].demand;
      for (const Path& q : paths[k].paths) {
        if (&q == &p) continue;
        bool priced_out = false;
        for (ArcId a : q.tolled)
          if (!column.count(a)) priced_out = true;
        if (priced_out) continue;
        // toll(p) - toll(q) <= base(q) - base(p)
        std::vector<Rational> row(static_cast<std::size_t>(n));
        for (ArcId a : p.tolled) row[static_cast<std::size_t>(column.at(a))] += 1;
        for (ArcId a : q.tolled) row[static_cast<std::size_t>(column.at(a))] -= 1;
        A.push_back(std::move(row));
        b.push_back(q.base_cost - p.base_cost);
      }
    }

    ExactLpResult lp = solve_exact_lp(A, b, c);
    if (lp.status == ExactLpResult::Status::Unbounded)
      throw std::logic_error("oracle LP unbounded; the toll-free path should cap every toll");
    if (lp.status == ExactLpResult::Status::Optimal && (!have || lp.objective > best.revenue)) {
      have = true;
      best.revenue = lp.objective;
      best.chosen = choice;
      best.tolls.assign(static_cast<std::size_t>(instance.network.num_arcs()), Rational(0));
      for (const Arc& arc : instance.network.arcs())
        if (arc.tolled) best.tolls[static_cast<std::size_t>(arc.id)] = unused_toll;
      for (const auto& [arc, col] : column) best.tolls[static_cast<std::size_t>(arc)] = lp.x[static_cast<std::size_t>(col)];
    }

    for (std::size_t k = 0; k < K; ++k) {
      if (++choice[k] < static_cast<int>(paths[k].size())) break;
      choice[k] = 0;
    }
  }
  best.assignments = combos;
  if (!have) throw std::logic_error("oracle found no feasible assignment");
  return best;
}

}  // namespace netprice
