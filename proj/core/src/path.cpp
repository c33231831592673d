#include "netprice/path.hpp"

#include <algorithm>
#include <stdexcept>

namespace netprice {

Path make_path(const Network& net, std::vector<ArcId> arcs) {
  Path path;
  std::vector<char> seen(static_cast<std::size_t>(net.num_nodes()), 0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    ArcId a = arcs[i];
    if (a < 0 || a >= net.num_arcs()) throw std::invalid_argument("path references a missing arc");
    const Arc& arc = net.arc(a);
    if (i > 0 && net.arc(arcs[i - 1]).head != arc.tail) throw std::invalid_argument("path arcs are not contiguous");
    if (i == 0) seen[static_cast<std::size_t>(arc.tail)] = 1;
    if (seen[static_cast<std::size_t>(arc.head)]) throw std::invalid_argument("path repeats a node");
    seen[static_cast<std::size_t>(arc.head)] = 1;
    path.base_cost += arc.cost;
    if (arc.tolled) path.tolled.push_back(a);
  }
  path.arcs = std::move(arcs);
  return path;
}

std::vector<NodeId> path_nodes(const Network& net, const Path& path) {
  std::vector<NodeId> nodes;
  if (path.arcs.empty()) return nodes;
  nodes.reserve(path.arcs.size() + 1);
  nodes.push_back(net.arc(path.arcs.front()).tail);
  for (ArcId a : path.arcs) nodes.push_back(net.arc(a).head);
  return nodes;
}

std::vector<ArcId> sorted_tolled(const Path& path) {
  std::vector<ArcId> s = path.tolled;
  std::sort(s.begin(), s.end());
  return s;
}

bool tolled_subset(const Path& a, const Path& b) {
  auto sa = sorted_tolled(a);
  auto sb = sorted_tolled(b);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

bool path_less(const Path& a, const Path& b) {
  if (a.base_cost != b.base_cost) return a.base_cost < b.base_cost;
  return a.arcs < b.arcs;
}

}  // namespace netprice
