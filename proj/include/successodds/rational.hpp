#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "successodds/error.hpp"

namespace successodds {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::usage, "zero denominator");
  return Rational(num, den);
}

/// Exact rational from a decimal literal ("0.10", "-3", "2.5e-1") or a
/// fraction ("1/3").
inline Rational parse_rational(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::parse, "not a decimal or fraction: '" + std::string(text) + "'");
  };
  if (text.empty()) return bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) return bad();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return bad();

  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return bad();
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) return bad();
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c < '0' || c > '9' || exponent > 400) return bad();
      exponent = exponent * 10 + (c - '0');
    }
    if (exp_negative) exponent = -exponent;
  }

  long shift = exponent - frac_digits;
  BigInt power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
  Rational value = shift < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
  return negative ? Rational(-value) : value;
}

/// Decimal rendering rounded half away from zero to `digits` places.
inline std::string format_fixed(const Rational& value, int digits) {
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
  Rational scaled = abs(value) * scale;
  BigInt num = numerator(scaled);
  BigInt den = denominator(scaled);
  BigInt q = num / den;
  BigInt r = num % den;
  if (2 * r >= den) q += 1;

  std::string body = q.str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  bool negative = value < 0 && q != 0;
  return negative ? "-" + body : body;
}

/// Exact rational value of a finite double.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::usage, "non-finite value");
  int exp = 0;
  double frac = std::frexp(x, &exp);
  // frac * 2^53 is an exact integer.
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  exp -= 53;
  BigInt pow2 = BigInt(1) << static_cast<unsigned>(exp < 0 ? -exp : exp);
  return exp < 0 ? Rational(BigInt(mant), pow2) : Rational(BigInt(mant) * pow2);
}

/// Like format_fixed but drops trailing zeros ("1.1" rather than "1.100").
inline std::string format_trimmed(const Rational& value, int max_digits) {
  std::string s = format_fixed(value, max_digits);
  if (s.find('.') == std::string::npos) return s;
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

inline std::string format_fixed(double value, int digits) {
  return format_fixed(from_double(value), digits);
}

}  // namespace successodds
