#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace mertens {

using Rational = mpq_class;

// Accepts "p/q", a bare integer, or a plain decimal like "0.25"; the result
// is canonicalized.  Malformed input or a zero denominator is a domain error.
Rational parse_rational(const std::string& text);

// Decimal rendering of an exact value: `digits` keeps at most `sig_digits`
// significant digits (truncated toward zero, never rounded up) and `exact`
// records whether the rendering lost anything.
struct DecimalString {
  std::string digits;
  bool exact = true;

  bool operator==(const DecimalString&) const = default;
};

DecimalString to_decimal(const Rational& value, int sig_digits = 12);

// Doubles are converted through their exact binary value, so a margin that
// was computed in floating point renders the same way on every platform.
DecimalString to_decimal(double value, int sig_digits = 12);

Rational pow_rational(const Rational& base, unsigned long exponent);

}  // namespace mertens
