#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace gsi {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p/q" and plain integers with optional sign. Decimal literals
// ("0.5", "1e3") are rejected so that all values stay exact.
Rational parse_rational(std::string_view text);

// Canonical form: "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& q);

inline Rational from_int(std::int64_t n) { return Rational(static_cast<long>(n)); }

// Requires q to be an integer that fits.
std::int64_t to_int64(const Rational& q);

}  // namespace gsi
