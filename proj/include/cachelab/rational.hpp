#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace cachelab {

/// Exact rational number. All rate formulas and bounds are evaluated in
/// exact arithmetic; decimals appear only at the printing boundary.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", a plain integer, or a decimal string like "0.25".
/// Decimals are converted exactly (no float round-trip).
Rational parse_rational(const std::string& text);

/// Canonical "p/q" form, lowest terms, q >= 1 (e.g. "225/128", "3/1").
std::string to_fraction_string(const Rational& value);

/// Decimal rendering with the given number of significant digits,
/// rounding half to even.
std::string to_decimal_string(const Rational& value, int significant_digits = 10);

BigInt floor_rational(const Rational& value);
BigInt ceil_rational(const Rational& value);

/// Nearest integer, ties toward the floor (2.5 -> 2, -0.5 -> -1).
BigInt round_half_down(const Rational& value);

/// base^exp for non-negative integer exponents.
Rational rational_pow(const Rational& base, unsigned exp);

/// Conversion that must not truncate; throws if out of range.
std::int64_t to_int64(const BigInt& value);

}  // namespace cachelab
