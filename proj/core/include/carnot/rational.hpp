#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace carnot {

/// Exact arbitrary-precision rational scalar. All algebraic identity checks
/// in the library run on this type with zero tolerance.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using RatVec = std::vector<Rational>;

/// Parses "p/q", plain integers and decimal literals ("-3", "1/2", "0.25").
/// Decimals convert exactly (0.25 -> 1/4). Throws ParseError on junk or a
/// zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical text form: "p" or "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

} // namespace carnot
