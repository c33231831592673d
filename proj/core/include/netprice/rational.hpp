#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace netprice {

/// Exact rational number. All arc costs, demands and big-M quantities use it
/// so that dominance and perturbation comparisons never see rounding ties.
using Rational = mpq_class;

/// Parses a decimal literal (`12`, `-3.25`, `1.5e-3`) or a fraction (`7/3`)
/// exactly. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Exact text form: a finite decimal when the denominator has only factors 2
/// and 5, otherwise `p/q`. parse_rational(format_rational(q)) == q.
std::string format_rational(const Rational& value);

/// Rounded rendering with `digits` significant digits, as used by LP files.
std::string format_significant(const Rational& value, int digits = 12);
std::string format_significant(double value, int digits = 12);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace netprice
