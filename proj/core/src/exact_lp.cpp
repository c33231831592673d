#include "netprice/exact_lp.hpp"

#include <stdexcept>

namespace netprice {

namespace {

// Dictionary tableau: row i reads x_basis[i] = rhs[i] - sum_j a[i][j] x_j over
// all columns (basic columns carry the identity).
struct Tableau {
  int m = 0;
  int cols = 0;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  std::vector<Rational> obj;  // reduced costs
  Rational value;

  void pivot(int r, int e) {
    const Rational p = a[r][e];
    for (auto& v : a[r]) v /= p;
    rhs[r] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][e] == 0) continue;
      const Rational f = a[i][e];
      for (int j = 0; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      rhs[i] -= f * rhs[r];
    }
    if (obj[e] != 0) {
      const Rational f = obj[e];
      for (int j = 0; j < cols; ++j)
        if (a[r][j] != 0) obj[j] -= f * a[r][j];
      value += f * rhs[r];
    }
    basis[r] = e;
  }

  // Maximizes the current objective row; returns false when unbounded.
  bool optimize(const std::vector<char>& allowed) {
    for (;;) {
      int e = -1;
      for (int j = 0; j < cols; ++j)
        if (allowed[j] && obj[j] > 0) {
          e = j;
          break;
        }
      if (e < 0) return true;
      int r = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (a[i][e] <= 0) continue;
        Rational ratio = rhs[i] / a[i][e];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, e);
    }
  }

  void set_objective(const std::vector<Rational>& c) {
    obj = c;
    value = 0;
    for (int i = 0; i < m; ++i) {
      const Rational cb = c[static_cast<std::size_t>(basis[i])];
      if (cb == 0) continue;
      for (int j = 0; j < cols; ++j)
        if (a[i][j] != 0) obj[j] -= cb * a[i][j];
      value += cb * rhs[i];
    }
  }
};

}  // namespace

ExactLpResult solve_exact_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                             const std::vector<Rational>& c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(b.size()) != m) throw std::invalid_argument("row count mismatch");
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("column count mismatch");

  // Columns: structural 0..n-1, slacks n..n+m-1, auxiliary n+m.
  Tableau t;
  t.m = m;
  t.cols = n + m + 1;
  const int aux = n + m;
  t.a.assign(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(t.cols)));
  t.rhs = b;
  t.basis.resize(static_cast<std::size_t>(m));
  int most_negative = -1;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.a[i][j] = A[i][j];
    t.a[i][n + i] = 1;
    t.a[i][aux] = -1;
    t.basis[i] = n + i;
    if (b[i] < 0 && (most_negative < 0 || b[i] < b[most_negative])) most_negative = i;
  }

  std::vector<char> allowed(static_cast<std::size_t>(t.cols), 1);
  if (most_negative >= 0) {
    std::vector<Rational> phase1(static_cast<std::size_t>(t.cols));
    phase1[aux] = -1;
    t.set_objective(phase1);
    t.pivot(most_negative, aux);
    t.optimize(allowed);
    if (t.value < 0) return {};
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] != aux) continue;
      for (int j = 0; j < aux; ++j)
        if (t.a[i][j] != 0) {
          t.pivot(i, j);
          break;
        }
    }
  }
  allowed[aux] = 0;
  for (int i = 0; i < m; ++i) t.a[i][aux] = 0;

  std::vector<Rational> cost(static_cast<std::size_t>(t.cols));
  for (int j = 0; j < n; ++j) cost[j] = c[j];
  t.set_objective(cost);
  ExactLpResult result;
  if (!t.optimize(allowed)) {
    result.status = ExactLpResult::Status::Unbounded;
    return result;
  }
  result.status = ExactLpResult::Status::Optimal;
  result.x.assign(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) result.x[static_cast<std::size_t>(t.basis[i])] = t.rhs[i];
  result.objective = t.value;
  return result;
}

}  // namespace netprice
