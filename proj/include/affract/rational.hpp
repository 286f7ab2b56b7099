#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace affract {

// All lattice math runs on arbitrary-precision rationals. Floating point
// never enters before file emission.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "p", "-p" or "p/q". Throws std::invalid_argument on a zero
/// denominator or garbage input.
Rational parse_rational(const std::string& text);

/// Round to `significant` decimal digits and print without an exponent,
/// trailing zeros stripped ("2", "-1.25", "0.333333"). Rounding is done in
/// exact integer arithmetic, half away from zero.
std::string format_decimal(const Rational& value, int significant = 6);

}  // namespace affract
