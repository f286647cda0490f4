#include "cdkit/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "cdkit/error.hpp"

namespace cdkit {

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite value has no rational form");
  Rational q(value);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("expected an integer, got '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

mpz_class pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view mant = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    std::string_view es = text.substr(e + 1);
    mpz_class ez = parse_integer(es);
    if (!ez.fits_slong_p() || abs(ez) > 4096) throw InputError("exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
  }
  bool negative = false;
  if (!mant.empty() && (mant.front() == '+' || mant.front() == '-')) {
    negative = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  auto dot = mant.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(mant);
  } else {
    std::string_view frac = mant.substr(dot + 1);
    digits = std::string(mant.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  }
  if (!all_digits(digits)) throw InputError("cannot parse rational '" + std::string(text) + "'");
  Rational q{mpz_class(digits, 10)};
  if (exponent > 0) q *= pow10(exponent);
  if (exponent < 0) q /= pow10(-exponent);
  if (negative) q = -q;
  q.canonicalize();
  return q;
}

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& q : values) out.push_back(q.get_d());
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace cdkit
