#include "netprice/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace netprice {

namespace {

constexpr std::size_t kMaxName = 255;
constexpr std::size_t kWrap = 200;

bool name_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(ch) != std::string_view::npos;
}

class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}
  void start(const std::string& head) {
    line_ = " " + head;
  }
  void add(const std::string& piece) {
    if (line_.size() + piece.size() + 1 > kWrap) {
      out_ << line_ << '\n';
      line_ = "   ";
    }
    line_ += ' ';
    line_ += piece;
  }
  void finish() { out_ << line_ << '\n'; }

 private:
  std::ostringstream& out_;
  std::string line_;
};

std::string signed_coef(const Rational& coef) {
  if (coef < 0) return "- " + format_significant(Rational(-coef));
  return "+ " + format_significant(coef);
}

}  // namespace

std::string lp_name(std::string_view name) {
  std::string out(name);
  for (char& ch : out) {
    if (ch == '[') ch = '(';
    else if (ch == ']') ch = ')';
    else if (ch == '-') ch = '_';
  }
  return out;
}

std::string write_lp(const ModelIR& model) {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  auto check = [&](const std::string& raw) {
    if (raw.size() > kMaxName) throw LpFormatError("name longer than 255 characters: " + raw.substr(0, 40) + "...");
    std::string n = lp_name(raw);
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
      throw LpFormatError("name not representable in LP format: " + raw);
    for (char ch : n)
      if (!name_char(ch)) throw LpFormatError("name not representable in LP format: " + raw);
    if (!seen.insert(n).second) throw LpFormatError("names collide in LP format: " + raw);
    return n;
  };
  for (const Variable& v : model.variables()) names.push_back(check(v.name));
  for (const Constraint& c : model.constraints()) check(c.tag);

  std::ostringstream out;
  LineWriter w(out);
  out << "Maximize\n";
  w.start("obj:");
  for (const Term& t : model.objective()) w.add(signed_coef(t.coef) + " " + names[static_cast<std::size_t>(t.var)]);
  w.finish();

  out << "Subject To\n";
  for (const Constraint& c : model.constraints()) {
    w.start(lp_name(c.tag) + ":");
    for (const Term& t : c.terms) w.add(signed_coef(t.coef) + " " + names[static_cast<std::size_t>(t.var)]);
    w.add(std::string(to_string(c.sense)) + " " + format_significant(c.rhs));
    w.finish();
  }

  std::ostringstream bounds;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.var(j);
    if (v.kind == VarKind::Binary) continue;
    const std::string& n = names[static_cast<std::size_t>(j)];
    const bool lo_zero = v.lower && *v.lower == 0;
    if (!v.lower && !v.upper) {
      bounds << ' ' << n << " free\n";
    } else if (v.lower && v.upper && *v.lower == *v.upper) {
      bounds << ' ' << n << " = " << format_significant(*v.lower) << '\n';
    } else if (v.upper) {
      bounds << ' ' << (v.lower ? format_significant(*v.lower) : std::string("-inf")) << " <= " << n
             << " <= " << format_significant(*v.upper) << '\n';
    } else if (!lo_zero) {
      bounds << ' ' << n << " >= " << format_significant(*v.lower) << '\n';
    }
  }
  if (!bounds.str().empty()) out << "Bounds\n" << bounds.str();

  bool any_binary = false;
  for (int j = 0; j < model.num_variables(); ++j) {
    if (model.var(j).kind != VarKind::Binary) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << ' ' << names[static_cast<std::size_t>(j)] << '\n';
  }
  out << "End\n";
  return out.str();
}

namespace {

enum class Tok { Name, Number, Sign, Sense, Colon, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == '\\') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (ch == '+' || ch == '-') {
      out.push_back({Tok::Sign, std::string(1, ch)});
      ++i;
    } else if (ch == '<' || ch == '>' || ch == '=') {
      std::string op(1, ch);
      ++i;
      if (i < s.size() && (s[i] == '=' || (ch == '=' && (s[i] == '<' || s[i] == '>')))) op += s[i++];
      if (op == "<" || op == "=<") op = "<=";
      if (op == ">" || op == "=>") op = ">=";
      out.push_back({Tok::Sense, op});
    } else if (ch == ':') {
      out.push_back({Tok::Colon, ":"});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          j = k;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i))});
      i = j;
    } else if (name_char(ch)) {
      std::size_t j = i;
      while (j < s.size() && name_char(s[j])) ++j;
      out.push_back({Tok::Name, std::string(s.substr(i, j - i))});
      i = j;
    } else {
      throw LpFormatError(std::string("unexpected character '") + ch + "'");
    }
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

// Recognizes a section keyword at the start of a line.
std::optional<std::pair<Section, bool>> section_of(const std::string& line) {
  std::string l = lower(line);
  while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
  std::size_t start = l.find_first_not_of(" \t");
  if (start == std::string::npos) return std::nullopt;
  l = l.substr(start);
  if (l == "maximize" || l == "maximum" || l == "max") return std::make_pair(Section::Objective, true);
  if (l == "minimize" || l == "minimum" || l == "min") return std::make_pair(Section::Objective, false);
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return std::make_pair(Section::Constraints, true);
  if (l == "bounds" || l == "bound") return std::make_pair(Section::Bounds, true);
  if (l == "binaries" || l == "binary" || l == "bin") return std::make_pair(Section::Binaries, true);
  if (l == "generals" || l == "general" || l == "gen") return std::make_pair(Section::Generals, true);
  if (l == "end") return std::make_pair(Section::End, true);
  return std::nullopt;
}

struct Reader {
  ModelIR model;
  bool maximize = true;

  int var(const std::string& name) { return model.variable(name, VarKind::Continuous); }

  Rational number(const std::string& text) {
    std::string t = lower(text);
    if (t == "inf" || t == "infinity") throw LpFormatError("infinite value where a number is required");
    return parse_rational(text);
  }

  // Parses `[sign] [number] name` terms until a sense token or the end.
  std::size_t terms(const std::vector<Token>& toks, std::size_t i, LinearExpr& expr) {
    while (i < toks.size() && toks[i].kind != Tok::Sense) {
      Rational sign(1);
      while (i < toks.size() && toks[i].kind == Tok::Sign) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      Rational coef(1);
      if (i < toks.size() && toks[i].kind == Tok::Number) coef = number(toks[i++].text);
      if (i < toks.size() && toks[i].kind == Tok::Name) {
        expr.add(var(toks[i++].text), sign * coef);
      } else if (i >= toks.size() || toks[i].kind == Tok::Sense || toks[i].kind == Tok::Sign) {
        expr.add_constant(sign * coef);
      } else {
        throw LpFormatError("malformed linear expression near '" + toks[i].text + "'");
      }
    }
    return i;
  }

  void objective(const std::vector<Token>& toks) {
    std::size_t i = 0;
    if (toks.size() >= 2 && toks[0].kind == Tok::Name && toks[1].kind == Tok::Colon) i = 2;
    std::vector<Token> rest(toks.begin() + static_cast<long>(i), toks.end());
    LinearExpr expr;
    terms(rest, 0, expr);
    for (const Term& t : expr.terms()) model.add_objective(t.var, maximize ? t.coef : Rational(-t.coef));
  }

  void constraints(const std::vector<Token>& toks) {
    std::size_t i = 0;
    int unnamed = 0;
    while (i < toks.size()) {
      std::string name;
      if (i + 1 < toks.size() && toks[i].kind == Tok::Name && toks[i + 1].kind == Tok::Colon) {
        name = toks[i].text;
        i += 2;
      } else {
        name = "R" + std::to_string(++unnamed);
      }
      LinearExpr expr;
      i = terms(toks, i, expr);
      if (i >= toks.size()) throw LpFormatError("constraint " + name + " has no sense");
      Sense sense = toks[i].text == "<=" ? Sense::LessEqual : toks[i].text == ">=" ? Sense::GreaterEqual : Sense::Equal;
      ++i;
      Rational sign(1);
      while (i < toks.size() && toks[i].kind == Tok::Sign) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      if (i >= toks.size() || toks[i].kind != Tok::Number) throw LpFormatError("constraint " + name + " has no right-hand side");
      Rational rhs = sign * number(toks[i++].text);
      model.add_constraint(expr, sense, rhs, name);
    }
  }

  std::optional<Rational> bound_value(const std::vector<Token>& toks, std::size_t& i) {
    Rational sign(1);
    while (i < toks.size() && toks[i].kind == Tok::Sign) {
      if (toks[i].text == "-") sign = -sign;
      ++i;
    }
    if (i >= toks.size()) throw LpFormatError("bound without a value");
    std::string t = lower(toks[i].text);
    ++i;
    if (t == "inf" || t == "infinity") return std::nullopt;
    return sign * parse_rational(toks[i - 1].text);
  }

  void bound_line(const std::vector<Token>& toks) {
    if (toks.empty()) return;
    if (toks.size() == 2 && toks[0].kind == Tok::Name && lower(toks[1].text) == "free") {
      Variable& v = model.var(var(toks[0].text));
      v.lower.reset();
      v.upper.reset();
      return;
    }
    std::size_t i = 0;
    if (toks[0].kind == Tok::Name && lower(toks[0].text) != "inf" && lower(toks[0].text) != "infinity") {
      Variable& v = model.var(var(toks[0].text));
      i = 1;
      if (i >= toks.size() || toks[i].kind != Tok::Sense) throw LpFormatError("malformed bound for " + toks[0].text);
      std::string op = toks[i++].text;
      auto value = bound_value(toks, i);
      if (op == "<=") v.upper = value;
      else if (op == ">=") v.lower = value;
      else v.lower = v.upper = value;
      return;
    }
    auto lo = bound_value(toks, i);
    if (i + 1 >= toks.size() || toks[i].kind != Tok::Sense || toks[i + 1].kind != Tok::Name)
      throw LpFormatError("malformed bound line");
    ++i;
    Variable& v = model.var(var(toks[i++].text));
    v.lower = lo;
    if (i < toks.size()) {
      if (toks[i].kind != Tok::Sense) throw LpFormatError("malformed bound line");
      ++i;
      v.upper = bound_value(toks, i);
    }
  }
};

}  // namespace

ModelIR read_lp(std::string_view text) {
  Reader r;
  Section section = Section::None;
  std::string buffer;
  std::vector<std::string> bound_lines;

  auto flush = [&]() {
    if (section == Section::Objective) r.objective(lex(buffer));
    else if (section == Section::Constraints) r.constraints(lex(buffer));
    buffer.clear();
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto s = section_of(line)) {
      flush();
      section = s->first;
      if (section == Section::Objective) r.maximize = s->second;
      if (section == Section::End) break;
      continue;
    }
    switch (section) {
      case Section::None:
        if (line.find_first_not_of(" \t\r") != std::string::npos && line.find_first_not_of(" \t") != line.find('\\'))
          throw LpFormatError("content before the objective section");
        break;
      case Section::Objective:
      case Section::Constraints:
        buffer += line;
        buffer += '\n';
        break;
      case Section::Bounds:
        bound_lines.push_back(line);
        break;
      case Section::Binaries:
      case Section::Generals:
        for (const Token& t : lex(line)) {
          if (t.kind != Tok::Name) throw LpFormatError("expected a variable name in the integer section");
          if (section == Section::Generals) throw LpFormatError("general integers are not supported");
          int j = r.var(t.text);
          r.model.var(j).kind = VarKind::Binary;
          r.model.var(j).lower = Rational(0);
          r.model.var(j).upper = Rational(1);
        }
        break;
      case Section::End:
        break;
    }
  }
  flush();
  for (const std::string& l : bound_lines) r.bound_line(lex(l));
  return std::move(r.model);
}

}  // namespace netprice
