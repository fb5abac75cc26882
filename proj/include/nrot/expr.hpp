#pragma once

#include <string_view>

#include "nrot/decimal.hpp"

namespace nrot {

/// Evaluates a NUM expression exactly.
///
/// Accepted forms:
///   [-]literal ((+|-) literal)*        left to right
///   min(l1, ..., ln) | max(...) | avg(...)
/// avg is the exact mean rounded half-to-even at `avg_frac_digits`.
/// Malformed input throws ParseError with a 1-based column.
ExactDecimal eval_expr(std::string_view expression, unsigned avg_frac_digits = 2);

}  // namespace nrot
