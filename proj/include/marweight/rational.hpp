#ifndef MARWEIGHT_RATIONAL_HPP
#define MARWEIGHT_RATIONAL_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "marweight/error.hpp"

namespace marweight {

using rational = boost::multiprecision::cpp_rational;

template <class T>
struct scalar_traits {
  static constexpr bool exact = false;
};

template <>
struct scalar_traits<rational> {
  static constexpr bool exact = true;
};

/// Absolute tolerance used for the mass-sum check of float-valued trees.
inline constexpr double mass_tolerance = 1e-9;

namespace detail {

/// Base-10 integer with optional sign. cpp_int alone would read "010" as octal and "0x1" as hex.
inline boost::multiprecision::cpp_int parse_decimal_integer(std::string_view digits, std::string_view whole) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.remove_prefix(1);
  }
  require(!digits.empty() && digits.find_first_not_of("0123456789") == std::string_view::npos, errc::parse_error,
          "not a rational literal: '" + std::string(whole) + "'");
  boost::multiprecision::cpp_int out = 0;
  for (char c : digits) out = out * 10 + (c - '0');
  return negative ? -out : out;
}

}  // namespace detail

/// Parses "p/q", an integer literal, or a plain decimal such as "-4.25".
inline rational parse_rational(std::string_view text) {
  using boost::multiprecision::cpp_int;
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const cpp_int num = detail::parse_decimal_integer(text.substr(0, slash), text);
    const cpp_int den = detail::parse_decimal_integer(text.substr(slash + 1), text);
    detail::require(den != 0, errc::parse_error, "zero denominator in '" + std::string(text) + "'");
    return rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return rational(detail::parse_decimal_integer(text, text));
  const auto frac = text.substr(dot + 1);
  detail::require(!frac.empty() && frac.find_first_not_of("0123456789") == std::string_view::npos, errc::parse_error,
                  "not a rational literal: '" + std::string(text) + "'");
  std::string digits(text.substr(0, dot));
  if (digits.empty() || digits == "-" || digits == "+") digits += '0';
  cpp_int scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const bool negative = digits[0] == '-';
  const cpp_int whole = detail::parse_decimal_integer(digits, text);
  const cpp_int part = detail::parse_decimal_integer(frac, text);
  const cpp_int magnitude = (negative ? -whole : whole) * scale + part;
  return rational(negative ? -magnitude : magnitude, scale);
}

inline std::string format_rational(const rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const rational& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

template <class T>
T abs_value(const T& value) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::fabs(value);
  } else {
    return value < 0 ? T(-value) : value;
  }
}

/// Relative-or-absolute comparison used across the library: |a-b| <= max(rel*max(|a|,|b|), abs).
inline bool nearly_equal(double a, double b, double rel = 1e-9, double abs = 1e-12) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(rel * scale, abs);
}

/// lhs <= rhs up to the library tolerance.
inline bool leq_tol(double lhs, double rhs, double rel = 1e-9, double abs = 1e-12) {
  return lhs <= rhs + std::max(rel * std::fabs(rhs), abs);
}

}  // namespace marweight

#endif
