#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace polymv {

using Rational = mpq_class;
using RationalPoint = std::vector<Rational>;
using Point = std::vector<double>;

/// num/den in lowest terms (mpq_class(num, den) does not reduce, and GMP
/// arithmetic expects reduced operands).
Rational ratio(long num, long den);

/// Parses "p/q", an integer, or a plain decimal ("0.25", "-1.5e-2") into an exact rational.
Rational parse_rational(std::string_view text);

/// Comma separated list of rationals, e.g. "1/4,1/2,1".
std::vector<Rational> parse_rational_list(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Every finite double is a dyadic rational; this returns it without rounding.
Rational exact_from_double(double value);

Rational pow(const Rational& base, int exponent);

Rational dot(const RationalPoint& a, const RationalPoint& b);

Point to_point(const RationalPoint& p);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Fixed 17 significant digit form used next to exact fractions.
std::string format_decimal17(double value);

}  // namespace polymv
