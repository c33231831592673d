#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netprice/rational.hpp"

namespace netprice {

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };

/// Solver-agnostic variable; nullopt bounds are infinite.
struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;
};

struct Term {
  Rational coef;
  int var = 0;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  Rational rhs;
  std::string tag;
};

/// Accumulates a linear expression; repeated variables are merged and zero
/// coefficients dropped by terms().
class LinearExpr {
 public:
  LinearExpr& add(int var, const Rational& coef) {
    coeffs_[var] += coef;
    return *this;
  }
  LinearExpr& add_constant(const Rational& value) {
    constant_ += value;
    return *this;
  }
  std::vector<Term> terms() const;
  const Rational& constant() const { return constant_; }

 private:
  std::map<int, Rational> coeffs_;
  Rational constant_;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A maximization MILP. Variable names and constraint tags are unique.
class ModelIR {
 public:
  int add_variable(std::string name, VarKind kind, std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt);
  std::optional<int> find_variable(std::string_view name) const;
  /// Returns the existing variable of that name or creates it.
  int variable(std::string name, VarKind kind, std::optional<Rational> lower = Rational(0),
               std::optional<Rational> upper = std::nullopt);

  /// Adds `expr (sense) rhs`; the expression constant moves to the right.
  void add_constraint(const LinearExpr& expr, Sense sense, const Rational& rhs, std::string tag);
  void add_constraint(Constraint c);
  bool has_tag(std::string_view tag) const { return tags_.count(std::string(tag)) != 0; }

  void add_objective(int var, const Rational& coef);

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& var(int index) const { return variables_[static_cast<std::size_t>(index)]; }
  Variable& var(int index) { return variables_[static_cast<std::size_t>(index)]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::vector<Term> objective() const { return objective_.terms(); }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;

  /// Constraints whose tag starts with `prefix` (e.g. "pa[").
  int count_tagged(std::string_view prefix) const;

 private:
  std::vector<Variable> variables_;
  std::unordered_map<std::string, int> names_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, int> tags_;
  LinearExpr objective_;
};

std::string_view to_string(Sense sense);

}  // namespace netprice
