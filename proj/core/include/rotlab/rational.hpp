#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace rotlab {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q", "-p/q", an integer, or a decimal literal with optional
// exponent ("0.25", "-1.5e-3") into an exact canonical rational.
Rational parse_rational(std::string_view text);

// Exact rational equal to the shortest decimal that round-trips to `value`,
// so 0.35 becomes 35/100 rather than the binary neighbour.
Rational rational_from_double(double value);

Integer floor(const Rational& x);

// Fractional part {x} = x - floor(x), the embedding of the circle in [0,1).
Rational frac(const Rational& x);

double to_double(const Rational& x);
long double to_long_double(const Rational& x);

// Natural log of a positive integer, valid far beyond double range.
double log_integer(const Integer& n);

Integer pow2(unsigned exponent);

std::uint64_t to_u64(const Integer& n);
Integer from_u64(std::uint64_t v);

std::string to_string(const Integer& n);
std::string to_string(const Rational& x);

}  // namespace rotlab
