#pragma once

#include <string_view>

#include "pjd/polynomial.hpp"

namespace pjd {

/// Parses an arithmetic expression in the ambient coordinates of `space`
/// ("x" or "x1" on the interval, "x1".."xd" on the simplex) with + - * ^,
/// parentheses, and division by constants. Exponents are nonnegative
/// integers. The result is over the free coordinates. Throws Error(Parse).
Polynomial parse_polynomial(std::string_view text, const StateSpace& space);

/// Parses "1.5", "-3", "9/2", "inf". Throws Error(Parse).
double parse_number(std::string_view text);

}  // namespace pjd
