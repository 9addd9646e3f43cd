#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace onestep {

/// Arbitrary-precision exact rational number.
using Rational = boost::multiprecision::cpp_rational;

/// Parses an unsigned rational literal: "12", "3/4" or "1.25".
/// Returns nullopt when the text is not exactly one such literal.
std::optional<Rational> parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise (q > 0, lowest terms).
std::string to_string(const Rational& value);

double to_double(const Rational& value);

bool is_integer(const Rational& value);

}  // namespace onestep
