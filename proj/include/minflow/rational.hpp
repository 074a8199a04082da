// Exact rational and integer helpers on top of GMP.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace minflow {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Parses "p", "p/q" or a plain decimal literal such as "-1.25e-3" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" for integers.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

Integer floor(const Rational& value);
Integer ceil(const Rational& value);
/// Nearest integer, halves rounded towards +infinity.
Integer round_nearest(const Rational& value);

Rational abs(const Rational& value);
Rational pow(const Rational& base, long exponent);
Integer pow(const Integer& base, unsigned long exponent);

/// Rational upper bound on sqrt(x) for x >= 0, tight to about 2^-bits relative.
Rational sqrt_upper(const Rational& x, unsigned bits = 32);

/// Integer k-th root bounds: returns r with r^k <= x < (r+1)^k, x >= 0.
Integer iroot_floor(const Integer& x, unsigned long k);

/// True if x (>= 0) is a perfect k-th power; writes the root.
bool exact_root(const Integer& x, unsigned long k, Integer& root);
bool exact_root(const Rational& x, unsigned long k, Rational& root);

/// 2^e as a rational for any signed e.
Rational pow2(long e);

/// floor(log2(x)) for x > 0.
long floor_log2(const Rational& x);

}  // namespace minflow
