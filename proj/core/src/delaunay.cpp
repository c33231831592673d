#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "netprice/generator.hpp"
#include "netprice/rational.hpp"

namespace netprice {

namespace {

// Sign of the orientation determinant, exact.
int orient(const Point& a, const Point& b, const Point& c) {
  double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  double bound = 1e-12 * (std::abs((b.x - a.x) * (c.y - a.y)) + std::abs((b.y - a.y) * (c.x - a.x)));
  if (std::abs(det) > bound) return det > 0 ? 1 : -1;
  Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  Rational e = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return sgn(e);
}

// > 0 when d lies strictly inside the circumcircle of counter-clockwise abc.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  const double det = al * (bdx * cdy - bdy * cdx) - bl * (adx * cdy - ady * cdx) + cl * (adx * bdy - ady * bdx);
  const double perm = al * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) + bl * (std::abs(adx * cdy) + std::abs(ady * cdx)) +
                      cl * (std::abs(adx * bdy) + std::abs(ady * bdx));
  if (std::abs(det) > 1e-10 * perm) return det > 0 ? 1 : -1;
  Rational Adx = Rational(a.x) - d.x, Ady = Rational(a.y) - d.y;
  Rational Bdx = Rational(b.x) - d.x, Bdy = Rational(b.y) - d.y;
  Rational Cdx = Rational(c.x) - d.x, Cdy = Rational(c.y) - d.y;
  Rational Al = Adx * Adx + Ady * Ady, Bl = Bdx * Bdx + Bdy * Bdy, Cl = Cdx * Cdx + Cdy * Cdy;
  Rational e = Al * (Bdx * Cdy - Bdy * Cdx) - Bl * (Adx * Cdy - Ady * Cdx) + Cl * (Adx * Bdy - Ady * Bdx);
  return sgn(e);
}

}  // namespace

Triangulation delaunay(const std::vector<Point>& input) {
  const int n = static_cast<int>(input.size());
  if (n < 3) throw std::invalid_argument("triangulation needs at least 3 points");
  double lo_x = input[0].x, hi_x = lo_x, lo_y = input[0].y, hi_y = lo_y;
  for (const Point& p : input) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double cx = (lo_x + hi_x) / 2, cy = (lo_y + hi_y) / 2;
  std::vector<Point> pts = input;
  // Super triangle far enough that its vertices never sit on a hull circle.
  const double far = span * 1e5;
  pts.push_back({cx - far, cy - far});
  pts.push_back({cx + far, cy - far});
  pts.push_back({cx, cy + far});

  std::vector<std::array<int, 3>> tris{{n, n + 1, n + 2}};
  for (int i = 0; i < n; ++i) {
    const Point& p = pts[static_cast<std::size_t>(i)];
    std::vector<std::array<int, 3>> keep;
    std::map<std::pair<int, int>, int> boundary;  // directed edge -> count
    for (const auto& t : tris) {
      if (incircle(pts[static_cast<std::size_t>(t[0])], pts[static_cast<std::size_t>(t[1])], pts[static_cast<std::size_t>(t[2])], p) > 0) {
        for (int e = 0; e < 3; ++e) boundary[{t[e], t[(e + 1) % 3]}]++;
      } else {
        keep.push_back(t);
      }
    }
    if (boundary.empty()) throw std::invalid_argument("duplicate point in triangulation input");
    for (const auto& [edge, count] : boundary) {
      if (boundary.count({edge.second, edge.first})) continue;  // interior edge of the cavity
      std::array<int, 3> t{edge.first, edge.second, i};
      if (orient(pts[static_cast<std::size_t>(t[0])], pts[static_cast<std::size_t>(t[1])], pts[static_cast<std::size_t>(t[2])]) <= 0)
        throw std::logic_error("degenerate cavity in triangulation");
      keep.push_back(t);
    }
    tris = std::move(keep);
  }

  Triangulation out;
  out.points = input;
  std::set<std::pair<int, int>> edges;
  for (const auto& t : tris) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) continue;
    out.triangles.push_back(t);
    for (int e = 0; e < 3; ++e) edges.insert(std::minmax(t[e], t[(e + 1) % 3]));
  }
  out.edges.assign(edges.begin(), edges.end());
  return out;
}

Triangulation delaunay_points(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("triangulation needs at least 3 points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (Point& p : pts) p = {u(rng), u(rng)};
  return delaunay(pts);
}

std::vector<std::pair<int, int>> voronoi_edges(const Triangulation& t) {
  std::map<std::pair<int, int>, int> owner;
  std::set<std::pair<int, int>> out;
  for (std::size_t i = 0; i < t.triangles.size(); ++i) {
    const auto& tri = t.triangles[i];
    for (int e = 0; e < 3; ++e) {
      auto key = std::minmax(tri[e], tri[(e + 1) % 3]);
      auto [it, fresh] = owner.emplace(key, static_cast<int>(i));
      if (!fresh) out.insert(std::minmax(it->second, static_cast<int>(i)));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace netprice
