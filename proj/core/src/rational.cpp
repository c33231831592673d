#include "netprice/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace netprice {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class pow10(unsigned long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("malformed number '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad_literal(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = !num.empty() && (num[0] == '-' || num[0] == '+');
    std::string_view num_digits = negative ? num.substr(1) : num;
    if (!all_digits(num_digits) || !all_digits(den)) bad_literal(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) bad_literal(text);
    Rational r(mpz_class(std::string(num_digits), 10), d);
    r.canonicalize();
    return (num[0] == '-') ? Rational(-r) : r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::size_t exp_pos = text.find_first_of("eE", pos);
  std::string_view mantissa = text.substr(pos, exp_pos == std::string_view::npos ? std::string_view::npos : exp_pos - pos);
  long exponent = 0;
  if (exp_pos != std::string_view::npos) {
    std::string_view exp_text = text.substr(exp_pos + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      exp_negative = exp_text[0] == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_literal(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_literal(text);
  if (!int_part.empty() && !all_digits(int_part)) bad_literal(text);
  if (!frac_part.empty() && !all_digits(frac_part)) bad_literal(text);

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class numerator(digits, 10);
  exponent -= static_cast<long>(frac_part.size());

  Rational r;
  if (exponent >= 0) {
    r = Rational(numerator * pow10(static_cast<unsigned long>(exponent)));
  } else {
    r = Rational(numerator, pow10(static_cast<unsigned long>(-exponent)));
    r.canonicalize();
  }
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
  mpz_class den = value.get_den();
  unsigned long twos = 0;
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return value.get_str();

  unsigned long scale = std::max(twos, fives);
  if (scale == 0) return value.get_num().get_str();

  mpz_class scaled = value.get_num() * pow10(scale) / value.get_den();
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= scale) digits.insert(0, scale - digits.size() + 1, '0');
  std::string out = digits.substr(0, digits.size() - scale) + "." + digits.substr(digits.size() - scale);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return negative ? "-" + out : out;
}

std::string format_significant(double value, int digits) {
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

std::string format_significant(const Rational& value, int digits) {
  return format_significant(value.get_d(), digits);
}

}  // namespace netprice
