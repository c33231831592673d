#include "netprice/solver.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "netprice/lp.hpp"
#include "netprice/lp_format.hpp"

namespace netprice {

namespace fs = std::filesystem;

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Feasible:
      return "feasible";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::BudgetExhausted:
      return "budget-exhausted";
  }
  return "?";
}

SolveStatus parse_status(std::string_view text) {
  for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible, SolveStatus::BudgetExhausted})
    if (to_string(s) == text) return s;
  throw SolverError("unknown solve status '" + std::string(text) + "'");
}

double SolveResult::value(const std::string& name) const {
  auto it = assignment.find(name);
  return it == assignment.end() ? 0.0 : it->second;
}

double relative_gap(double objective, double best_bound) {
  if (!std::isfinite(objective) || !std::isfinite(best_bound)) return kInf;
  return std::max(0.0, (best_bound - objective) / std::max(1e-10, std::abs(best_bound)));
}

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void verify(const ModelIR& model, const SolveResult& result) {
  if (result.assignment.empty()) return;
  auto bad = check_assignment(model, result);
  if (bad.empty()) return;
  std::string list;
  for (std::size_t i = 0; i < bad.size() && i < 5; ++i) list += (i ? ", " : "") + bad[i];
  throw SolverError("solution violates the model: " + list);
}

}  // namespace

SolveResult BuiltinSolver::solve(const ModelIR& model, double budget) {
  const auto start = Clock::now();
  LpData lp;
  const int n = model.num_variables();
  const int m = model.num_constraints();
  lp.A = Eigen::MatrixXd::Zero(m, n);
  lp.c.assign(static_cast<std::size_t>(n), 0.0);
  lp.col_lo.resize(static_cast<std::size_t>(n));
  lp.col_hi.resize(static_cast<std::size_t>(n));
  lp.integer.assign(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.var(j);
    auto u = static_cast<std::size_t>(j);
    lp.col_lo[u] = v.lower ? to_double(*v.lower) : -kInf;
    lp.col_hi[u] = v.upper ? to_double(*v.upper) : kInf;
    lp.integer[u] = v.kind == VarKind::Binary;
  }
  for (const Term& t : model.objective()) lp.c[static_cast<std::size_t>(t.var)] = to_double(t.coef);
  lp.row_lo.resize(static_cast<std::size_t>(m));
  lp.row_hi.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Constraint& c = model.constraints()[static_cast<std::size_t>(i)];
    for (const Term& t : c.terms) lp.A(i, t.var) += to_double(t.coef);
    const double rhs = to_double(c.rhs);
    lp.row_lo[static_cast<std::size_t>(i)] = c.sense == Sense::LessEqual ? -kInf : rhs;
    lp.row_hi[static_cast<std::size_t>(i)] = c.sense == Sense::GreaterEqual ? kInf : rhs;
  }

  MilpOptions options;
  options.time_limit = budget;
  MilpResult milp = solve_milp(lp, options);

  SolveResult result;
  switch (milp.status) {
    case MilpResult::Status::Optimal:
      result.status = SolveStatus::Optimal;
      break;
    case MilpResult::Status::Feasible:
      result.status = SolveStatus::Feasible;
      break;
    case MilpResult::Status::Infeasible:
      result.status = SolveStatus::Infeasible;
      break;
    case MilpResult::Status::TimeLimit:
      result.status = SolveStatus::BudgetExhausted;
      break;
    case MilpResult::Status::Unbounded:
      throw SolverError("model is unbounded");
  }
  result.objective = milp.objective;
  result.best_bound = milp.best_bound;
  if (result.status == SolveStatus::Infeasible) {
    result.objective = -kInf;
    result.best_bound = -kInf;
  }
  result.gap = result.status == SolveStatus::Optimal ? 0.0 : relative_gap(result.objective, result.best_bound);
  if (milp.has_solution)
    for (int j = 0; j < n; ++j) result.assignment[model.var(j).name] = milp.x[static_cast<std::size_t>(j)];
  result.wall_time = seconds_since(start);
  verify(model, result);
  return result;
}

ExternalSolver::ExternalSolver(std::string command) : command_(std::move(command)) {
  if (command_.find("{lp}") == std::string::npos || command_.find("{sol}") == std::string::npos)
    throw ConfigError("solver.cmd must contain {lp} and {sol}");
  std::istringstream in(command_);
  std::string program;
  in >> program;
  bool found = false;
  if (program.find('/') != std::string::npos) {
    found = ::access(program.c_str(), X_OK) == 0;
  } else if (const char* path = std::getenv("PATH")) {
    std::istringstream dirs(path);
    std::string dir;
    while (std::getline(dirs, dir, ':'))
      if (!dir.empty() && ::access((fs::path(dir) / program).c_str(), X_OK) == 0) found = true;
  }
  if (!found) throw ConfigError("solver executable not found: " + program);
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static std::atomic<unsigned> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("netprice-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

SolveResult ExternalSolver::solve(const ModelIR& model, double budget) {
  const auto start = Clock::now();
  const fs::path dir = scratch_dir();
  const fs::path lp = dir / "model.lp";
  const fs::path sol = dir / "model.sol";
  const fs::path log = dir / "solver.log";
  {
    std::ofstream out(lp);
    out << write_lp(model);
  }
  std::string cmd = replace_all(command_, "{lp}", shell_quote(lp.string()));
  cmd = replace_all(cmd, "{sol}", shell_quote(sol.string()));
  std::ostringstream b;
  b << budget;
  cmd = replace_all(cmd, "{budget}", b.str());
  const int rc = std::system((cmd + " > " + shell_quote(log.string()) + " 2>&1").c_str());
  if (rc != 0 || !fs::exists(sol)) {
    std::string output = slurp(log);
    fs::remove_all(dir);
    throw SolverError("solver command failed (status " + std::to_string(rc) + "): " + output);
  }
  SolveResult parsed = read_solution(slurp(sol));
  fs::remove_all(dir);

  std::unordered_map<std::string, std::string> back;
  for (const Variable& v : model.variables()) back.emplace(lp_name(v.name), v.name);
  SolveResult result = parsed;
  result.assignment.clear();
  for (const auto& [name, value] : parsed.assignment) {
    auto it = back.find(name);
    if (it == back.end()) throw SolverError("solution names unknown variable " + name);
    result.assignment[it->second] = value;
  }
  if (result.status == SolveStatus::Infeasible) {
    result.objective = -kInf;
    result.best_bound = -kInf;
  } else if (!result.assignment.empty()) {
    double obj = 0.0;
    for (const Term& t : model.objective()) obj += to_double(t.coef) * result.value(model.var(t.var).name);
    result.objective = obj;
    if (result.status == SolveStatus::Optimal) result.best_bound = std::max(result.best_bound, obj);
  }
  result.gap = relative_gap(result.objective, result.best_bound);
  if (result.status == SolveStatus::Optimal && !std::isfinite(result.gap)) result.gap = 0.0;
  result.wall_time = seconds_since(start);
  verify(model, result);
  return result;
}

std::string write_solution(const SolveResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "# status " << to_string(result.status) << '\n';
  out << "# objective " << result.objective << '\n';
  out << "# bound " << result.best_bound << '\n';
  for (const auto& [name, value] : result.assignment) out << lp_name(name) << ' ' << value << '\n';
  return out.str();
}

SolveResult read_solution(std::string_view text) {
  SolveResult r;
  r.status = SolveStatus::Feasible;
  r.objective = -kInf;
  r.best_bound = kInf;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto parse_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw SolverError("solution line " + std::to_string(number) + ": bad number '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    ++number;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "#") {
      std::string key, value;
      ls >> key >> value;
      if (key == "status") r.status = parse_status(value);
      else if (key == "objective") r.objective = parse_double(value);
      else if (key == "bound") r.best_bound = parse_double(value);
      continue;
    }
    std::string value, extra;
    if (!(ls >> value) || (ls >> extra)) throw SolverError("solution line " + std::to_string(number) + ": expected '<name> <value>'");
    r.assignment[first] = parse_double(value);
  }
  return r;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  SolverConfig config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "solver.cmd") {
      config.command = value;
    } else if (key == "solver.workers") {
      try {
        config.workers = std::stoi(value);
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(number) + ": solver.workers must be an integer");
      }
      if (config.workers < 1) throw ConfigError("solver.workers must be at least 1");
    } else {
      throw ConfigError(path + ":" + std::to_string(number) + ": unknown key " + key);
    }
  }
  return config;
}

std::unique_ptr<MilpSolver> make_solver(const SolverConfig& config) {
  if (config.command.empty()) return std::make_unique<BuiltinSolver>();
  return std::make_unique<ExternalSolver>(config.command);
}

std::vector<std::string> check_assignment(const ModelIR& model, const SolveResult& result, double tol) {
  std::vector<std::string> bad;
  std::vector<double> x(static_cast<std::size_t>(model.num_variables()));
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.var(j);
    double value = result.value(v.name);
    x[static_cast<std::size_t>(j)] = value;
    if ((v.lower && value < to_double(*v.lower) - tol) || (v.upper && value > to_double(*v.upper) + tol))
      bad.push_back("bounds:" + v.name);
    if (v.kind == VarKind::Binary && std::abs(value - std::round(value)) > tol) bad.push_back("integrality:" + v.name);
  }
  for (const Constraint& c : model.constraints()) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += to_double(t.coef) * x[static_cast<std::size_t>(t.var)];
    const double rhs = to_double(c.rhs);
    const double slack = tol;
    bool ok = true;
    if (c.sense != Sense::GreaterEqual && lhs > rhs + slack) ok = false;
    if (c.sense != Sense::LessEqual && lhs < rhs - slack) ok = false;
    if (!ok) bad.push_back(c.tag);
  }
  return bad;
}

}  // namespace netprice
