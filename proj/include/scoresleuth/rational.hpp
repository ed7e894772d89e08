#pragma once

// Exact rational numbers and decimal text handling.
//
// Reported scores are parsed from their decimal text straight into rationals,
// so no binary floating point ever reaches a decision procedure.

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "scoresleuth/errors.hpp"

namespace scoresleuth {

using Rational = mpq_class;
using BigInt = mpz_class;
using Count = std::int64_t;

inline Rational make_rational(Count num, Count den = 1) {
  Rational q(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  q.canonicalize();
  return q;
}

inline BigInt pow10(unsigned k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

inline BigInt floor_of(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_of(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt isqrt(const BigInt& v) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

inline bool fits_count(const BigInt& v) { return v.fits_slong_p() != 0; }

inline Count to_count(const BigInt& v) {
  if (!fits_count(v)) throw std::overflow_error("integer does not fit a 64-bit count");
  return static_cast<Count>(v.get_si());
}

inline Rational ten_to_minus(int k) {
  if (k >= 0) return Rational(BigInt(1), pow10(static_cast<unsigned>(k)));
  return Rational(pow10(static_cast<unsigned>(-k)));
}

/// Canonical text: "a" or "a/b" in lowest terms.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// A decimal numeral together with the number of decimal places it carries.
struct DecimalText {
  Rational value;
  /// Digits after the point, minus the exponent when written as "1.5e-3".
  int decimals = 0;
};

inline DecimalText parse_decimal(std::string_view text) {
  auto fail = [&]() -> DecimalText {
    throw Error(ErrorCode::parse_error, "not a decimal numeral: '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = text.size();
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (i == end) return fail();

  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < end; ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();

  long exponent = 0;
  if (i < end) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    ++i;
    bool exp_negative = false;
    if (i < end && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i == end) return fail();
    for (; i < end; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) return fail();
    }
    if (exp_negative) exponent = -exponent;
  }

  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  const int decimals = frac_digits - static_cast<int>(exponent);
  Rational value(mantissa);
  value *= ten_to_minus(decimals);
  value.canonicalize();
  return DecimalText{value, decimals};
}

/// Accepts decimal numerals ("0.8464", "1e-4") and fractions ("1/10000").
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text).value;
  const DecimalText num = parse_decimal(text.substr(0, slash));
  const DecimalText den = parse_decimal(text.substr(slash + 1));
  if (den.value == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  Rational q = num.value / den.value;
  q.canonicalize();
  return q;
}

/// Radius 10^-k for a value written with k decimal places. Integer text gives 1.
inline Rational infer_radius_from_text(std::string_view value_text) {
  return ten_to_minus(parse_decimal(value_text).decimals);
}

/// Renders scaled / 10^k with exactly k decimal places ("-0.50", "1").
inline std::string format_scaled_decimal(const BigInt& scaled, unsigned k) {
  const bool negative = sgn(scaled) < 0;
  std::string digits = BigInt(abs(scaled)).get_str();
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  std::string out = negative ? "-" : "";
  out += digits.substr(0, digits.size() - k);
  if (k > 0) {
    out += '.';
    out += digits.substr(digits.size() - k);
  }
  return out;
}

}  // namespace scoresleuth
