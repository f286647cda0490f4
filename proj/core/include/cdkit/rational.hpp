#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace cdkit {

using Rational = mpq_class;

/// Exact binary value of a finite double.
Rational exact_rational(double value);

/// Parses "3", "-2/7", "0.25" or "1e-3". Decimal strings are read as the
/// exact decimal fraction, not as the nearest double.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return q.get_d(); }

std::vector<double> to_doubles(const std::vector<Rational>& values);

/// "p/q" or "p" in lowest terms.
std::string to_string(const Rational& q);

}  // namespace cdkit
