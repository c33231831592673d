#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netprice/rational.hpp"

namespace netprice {

using NodeId = int;
using ArcId = int;

struct Arc {
  ArcId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  Rational cost;
  bool tolled = false;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed multigraph with tolled (A1) and toll-free (A2) arcs. Arc ids are
/// dense and equal to the position in arcs(). Parallel arcs are allowed,
/// self-loops are not.
class Network {
 public:
  Network() = default;
  /// Arc ids are reassigned to positions. Throws std::invalid_argument on a
  /// self-loop or an out-of-range endpoint.
  Network(int num_nodes, std::vector<Arc> arcs);

  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int num_tolled() const { return num_tolled_; }

  const Arc& arc(ArcId a) const { return arcs_[static_cast<std::size_t>(a)]; }
  std::span<const Arc> arcs() const { return arcs_; }
  std::span<const ArcId> out_arcs(NodeId i) const { return out_[static_cast<std::size_t>(i)]; }
  std::span<const ArcId> in_arcs(NodeId i) const { return in_[static_cast<std::size_t>(i)]; }
  std::vector<ArcId> tolled_arcs() const;

  bool valid_node(NodeId i) const { return i >= 0 && i < num_nodes_; }

  /// Same topology with new costs (indexed by arc id).
  Network with_costs(std::span<const Rational> costs) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.num_nodes_ == b.num_nodes_ && a.arcs_ == b.arcs_;
  }

 private:
  int num_nodes_ = 0;
  int num_tolled_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

struct Commodity {
  NodeId origin = 0;
  NodeId destination = 0;
  Rational demand{1};

  /// Flow-balance right-hand side b_i: +1 at the origin, -1 at the destination.
  int balance(NodeId i) const { return i == origin ? 1 : (i == destination ? -1 : 0); }

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

struct ProblemInstance {
  Network network;
  std::vector<Commodity> commodities;
  std::string label;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads the line-oriented instance format:
///
///     npp <nodes> <arcs> <commodities>
///     arc <tail> <head> <cost> <T|F>        (one per arc, ids in file order)
///     commodity <origin> <destination> <demand>
///
/// Blank lines and `#` comments are ignored; a `# label: <text>` comment sets
/// the instance label. Throws ParseError for syntax problems and
/// InstanceError for dangling node references.
ProblemInstance parse_instance(std::string_view text);
ProblemInstance load_instance(const std::string& path);

std::string serialize_instance(const ProblemInstance& instance);
void save_instance(const ProblemInstance& instance, const std::string& path);

struct Diagnostic {
  enum class Kind { NonpositiveCost, NoTollFreePath, BadCommodity };
  Kind kind;
  int index;  // arc id or commodity index
  std::string message;
};

/// One diagnostic per violated instance requirement; empty means valid.
std::vector<Diagnostic> validate_instance(const ProblemInstance& instance);

}  // namespace netprice
