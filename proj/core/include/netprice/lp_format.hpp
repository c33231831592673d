#pragma once

#include <string>
#include <string_view>

#include "netprice/model.hpp"

namespace netprice {

class LpFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model names rendered in LP syntax: brackets become parentheses and
/// hyphens underscores (`lin-cs-pp[0,2]` -> `lin_cs_pp(0,2)`).
std::string lp_name(std::string_view name);

/// CPLEX LP text with sections Maximize, Subject To, Bounds, Binaries, End.
/// Coefficients use 12 significant digits; rows and columns keep model order.
/// Throws LpFormatError on names longer than 255 characters or on two names
/// that collide after rendering.
std::string write_lp(const ModelIR& model);

/// Parses LP text (the subset write_lp produces, plus Minimize and a few
/// common spellings). Names are kept in LP form. Coefficients come back as
/// the exact value of their decimal text.
ModelIR read_lp(std::string_view text);

}  // namespace netprice
