#include "netprice/network.hpp"

#include <fstream>
#include <sstream>

#include "netprice/shortest_path.hpp"

namespace netprice {

Network::Network(int num_nodes, std::vector<Arc> arcs)
    : num_nodes_(num_nodes), arcs_(std::move(arcs)) {
  if (num_nodes < 0) throw std::invalid_argument("negative node count");
  out_.resize(static_cast<std::size_t>(num_nodes));
  in_.resize(static_cast<std::size_t>(num_nodes));
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    Arc& arc = arcs_[a];
    arc.id = static_cast<ArcId>(a);
    if (!valid_node(arc.tail) || !valid_node(arc.head))
      throw std::invalid_argument("arc " + std::to_string(a) + " references a missing node");
    if (arc.tail == arc.head)
      throw std::invalid_argument("arc " + std::to_string(a) + " is a self-loop");
    out_[static_cast<std::size_t>(arc.tail)].push_back(arc.id);
    in_[static_cast<std::size_t>(arc.head)].push_back(arc.id);
    if (arc.tolled) ++num_tolled_;
  }
}

std::vector<ArcId> Network::tolled_arcs() const {
  std::vector<ArcId> result;
  for (const Arc& a : arcs_)
    if (a.tolled) result.push_back(a.id);
  return result;
}

Network Network::with_costs(std::span<const Rational> costs) const {
  if (costs.size() != arcs_.size()) throw std::invalid_argument("cost vector size mismatch");
  std::vector<Arc> arcs = arcs_;
  for (std::size_t a = 0; a < arcs.size(); ++a) arcs[a].cost = costs[a];
  return Network(num_nodes_, std::move(arcs));
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

int parse_int(const std::string& word, int line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(word, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + word + "'");
  }
  if (used != word.size()) throw ParseError(line, "expected an integer, got '" + word + "'");
  return value;
}

Rational parse_number(const std::string& word, int line) {
  try {
    return parse_rational(word);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

ProblemInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  int num_nodes = 0;
  int num_arcs = 0;
  int num_commodities = 0;
  std::vector<Arc> arcs;
  ProblemInstance instance;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      line.erase(hash);
      const std::string key = " label:";
      if (comment.rfind(key, 0) == 0) {
        std::string label = comment.substr(key.size());
        while (!label.empty() && label.front() == ' ') label.erase(label.begin());
        while (!label.empty() && (label.back() == ' ' || label.back() == '\r')) label.pop_back();
        instance.label = label;
      }
    }
    auto words = split_words(line);
    if (words.empty()) continue;

    const std::string& kind = words[0];
    if (!have_header) {
      if (kind != "npp" || words.size() != 4)
        throw ParseError(line_no, "expected header 'npp <nodes> <arcs> <commodities>'");
      num_nodes = parse_int(words[1], line_no);
      num_arcs = parse_int(words[2], line_no);
      num_commodities = parse_int(words[3], line_no);
      if (num_nodes < 0 || num_arcs < 0 || num_commodities < 0)
        throw ParseError(line_no, "negative count in header");
      have_header = true;
      continue;
    }
    if (kind == "arc") {
      if (words.size() != 5) throw ParseError(line_no, "expected 'arc <tail> <head> <cost> <T|F>'");
      if (!instance.commodities.empty()) throw ParseError(line_no, "arc after commodity lines");
      if (static_cast<int>(arcs.size()) >= num_arcs) throw ParseError(line_no, "more arcs than declared");
      if (words[4] != "T" && words[4] != "F") throw ParseError(line_no, "toll flag must be T or F");
      Arc arc;
      arc.id = static_cast<ArcId>(arcs.size());
      arc.tail = parse_int(words[1], line_no);
      arc.head = parse_int(words[2], line_no);
      arc.cost = parse_number(words[3], line_no);
      arc.tolled = words[4] == "T";
      if (arc.tail < 0 || arc.tail >= num_nodes || arc.head < 0 || arc.head >= num_nodes)
        throw InstanceError("line " + std::to_string(line_no) + ": arc references a node outside 0.." +
                            std::to_string(num_nodes - 1));
      if (arc.tail == arc.head) throw InstanceError("line " + std::to_string(line_no) + ": self-loop arc");
      arcs.push_back(arc);
    } else if (kind == "commodity") {
      if (words.size() != 4) throw ParseError(line_no, "expected 'commodity <origin> <destination> <demand>'");
      if (static_cast<int>(instance.commodities.size()) >= num_commodities)
        throw ParseError(line_no, "more commodities than declared");
      Commodity c;
      c.origin = parse_int(words[1], line_no);
      c.destination = parse_int(words[2], line_no);
      c.demand = parse_number(words[3], line_no);
      if (c.origin < 0 || c.origin >= num_nodes || c.destination < 0 || c.destination >= num_nodes)
        throw InstanceError("line " + std::to_string(line_no) + ": commodity references a node outside 0.." +
                            std::to_string(num_nodes - 1));
      instance.commodities.push_back(c);
    } else {
      throw ParseError(line_no, "unknown record '" + kind + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  if (static_cast<int>(arcs.size()) != num_arcs)
    throw ParseError(line_no, "declared " + std::to_string(num_arcs) + " arcs, found " + std::to_string(arcs.size()));
  if (static_cast<int>(instance.commodities.size()) != num_commodities)
    throw ParseError(line_no, "declared " + std::to_string(num_commodities) + " commodities, found " +
                                  std::to_string(instance.commodities.size()));
  instance.network = Network(num_nodes, std::move(arcs));
  return instance;
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ProblemInstance instance = parse_instance(buffer.str());
  if (instance.label.empty()) {
    auto slash = path.find_last_of('/');
    instance.label = slash == std::string::npos ? path : path.substr(slash + 1);
  }
  return instance;
}

std::string serialize_instance(const ProblemInstance& instance) {
  std::ostringstream out;
  if (!instance.label.empty()) out << "# label: " << instance.label << "\n";
  const Network& net = instance.network;
  out << "npp " << net.num_nodes() << " " << net.num_arcs() << " " << instance.commodities.size() << "\n";
  for (const Arc& a : net.arcs())
    out << "arc " << a.tail << " " << a.head << " " << format_rational(a.cost) << " " << (a.tolled ? "T" : "F")
        << "\n";
  for (const Commodity& c : instance.commodities)
    out << "commodity " << c.origin << " " << c.destination << " " << format_rational(c.demand) << "\n";
  return out.str();
}

void save_instance(const ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << serialize_instance(instance);
}

std::vector<Diagnostic> validate_instance(const ProblemInstance& instance) {
  std::vector<Diagnostic> diagnostics;
  const Network& net = instance.network;
  for (const Arc& a : net.arcs()) {
    if (a.cost <= 0)
      diagnostics.push_back({Diagnostic::Kind::NonpositiveCost, a.id,
                             "nonpositive cost on arc " + std::to_string(a.id)});
  }
  for (std::size_t k = 0; k < instance.commodities.size(); ++k) {
    const Commodity& c = instance.commodities[k];
    const int index = static_cast<int>(k);
    if (!net.valid_node(c.origin) || !net.valid_node(c.destination) || c.origin == c.destination) {
      diagnostics.push_back({Diagnostic::Kind::BadCommodity, index,
                             "commodity " + std::to_string(k) + " has invalid endpoints"});
      continue;
    }
    if (c.demand <= 0)
      diagnostics.push_back({Diagnostic::Kind::BadCommodity, index,
                             "nonpositive demand for commodity " + std::to_string(k)});
    if (!reachable(net, c.origin, c.destination, /*toll_free_only=*/true))
      diagnostics.push_back({Diagnostic::Kind::NoTollFreePath, index,
                             "no toll-free path for commodity " + std::to_string(k)});
  }
  return diagnostics;
}

}  // namespace netprice
