#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace gpk {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(Integer(num), Integer(den));
}

/// Lowest-terms text form: "3", "-1/32".
inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact value of a finite double.
inline Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  return Rational(v);
}

/// Parses an integer or "p/q" literal. Decimals and exponents are rejected.
/// Returns false on malformed input.
inline bool parse_rational(std::string_view text, Rational& out) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (!digits(num) || !digits(den)) return false;
  const Integer n{std::string(num)};
  const Integer d{std::string(den)};
  if (d == 0) return false;
  out = Rational(negative ? Integer(-n) : n, d);
  return true;
}

}  // namespace gpk
