#include "netprice/model.hpp"

namespace netprice {

std::vector<Term> LinearExpr::terms() const {
  std::vector<Term> out;
  for (const auto& [var, coef] : coeffs_)
    if (coef != 0) out.push_back({coef, var});
  return out;
}

int ModelIR::add_variable(std::string name, VarKind kind, std::optional<Rational> lower,
                          std::optional<Rational> upper) {
  if (names_.count(name)) throw ModelError("duplicate variable " + name);
  if (kind == VarKind::Binary) {
    lower = Rational(0);
    upper = Rational(1);
  }
  int index = static_cast<int>(variables_.size());
  names_.emplace(name, index);
  variables_.push_back(Variable{std::move(name), kind, std::move(lower), std::move(upper)});
  return index;
}

std::optional<int> ModelIR::find_variable(std::string_view name) const {
  auto it = names_.find(std::string(name));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

int ModelIR::variable(std::string name, VarKind kind, std::optional<Rational> lower, std::optional<Rational> upper) {
  if (auto found = find_variable(name)) return *found;
  return add_variable(std::move(name), kind, std::move(lower), std::move(upper));
}

void ModelIR::add_constraint(const LinearExpr& expr, Sense sense, const Rational& rhs, std::string tag) {
  add_constraint(Constraint{expr.terms(), sense, rhs - expr.constant(), std::move(tag)});
}

void ModelIR::add_constraint(Constraint c) {
  if (c.terms.empty()) throw ModelError("constraint " + c.tag + " has no terms");
  if (tags_.count(c.tag)) throw ModelError("duplicate constraint tag " + c.tag);
  for (const Term& t : c.terms)
    if (t.var < 0 || t.var >= num_variables()) throw ModelError("constraint " + c.tag + " uses an undeclared variable");
  tags_.emplace(c.tag, static_cast<int>(constraints_.size()));
  constraints_.push_back(std::move(c));
}

void ModelIR::add_objective(int var, const Rational& coef) {
  if (var < 0 || var >= num_variables()) throw ModelError("objective uses an undeclared variable");
  objective_.add(var, coef);
}

int ModelIR::num_binaries() const {
  int n = 0;
  for (const Variable& v : variables_)
    if (v.kind == VarKind::Binary) ++n;
  return n;
}

int ModelIR::count_tagged(std::string_view prefix) const {
  int n = 0;
  for (const Constraint& c : constraints_)
    if (c.tag.compare(0, prefix.size(), prefix) == 0) ++n;
  return n;
}

std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::LessEqual:
      return "<=";
    case Sense::Equal:
      return "=";
    case Sense::GreaterEqual:
      return ">=";
  }
  return "?";
}

}  // namespace netprice
