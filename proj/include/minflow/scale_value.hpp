// Exact positive scalars of the form q * rho^(1/D).
//
// Box half-widths at rational parameters are rational; event parameters
// obtained by shrinking carry a d-th root, and companion scales of such
// events carry a d^2-th root. All of these live in this family, which is
// closed under products, quotients and rational powers. Comparisons are
// decided exactly by raising both sides to a common power.
#pragma once

#include "minflow/rational.hpp"

#include <compare>
#include <iosfwd>
#include <string>

namespace minflow {

class ScaleValue {
 public:
  ScaleValue();  // the value 1
  ScaleValue(const Rational& value);  // NOLINT: implicit by design of the arithmetic
  ScaleValue(const Rational& coefficient, const Rational& radicand, unsigned long degree);

  static ScaleValue from_int(long value) { return ScaleValue(Rational(value)); }

  const Rational& coefficient() const { return coef_; }
  const Rational& radicand() const { return rad_; }
  unsigned long degree() const { return deg_; }

  bool is_rational() const { return deg_ == 1; }
  /// Only valid when is_rational().
  Rational as_rational() const;

  /// Representation with root degree exactly `degree`; requires degree to be
  /// a multiple of this->degree(). Returns {coefficient, radicand}.
  std::pair<Rational, Rational> with_degree(unsigned long degree) const;

  ScaleValue operator*(const ScaleValue& other) const;
  ScaleValue operator/(const ScaleValue& other) const;
  ScaleValue& operator*=(const ScaleValue& other) { return *this = *this * other; }
  ScaleValue& operator/=(const ScaleValue& other) { return *this = *this / other; }

  /// this * r for a positive rational r; keeps the radicand as is.
  ScaleValue scaled(const Rational& r) const;

  ScaleValue pow(long exponent) const;
  /// this^(num/den), den > 0.
  ScaleValue pow(long num, unsigned long den) const;
  ScaleValue inverse() const { return pow(-1); }

  std::strong_ordering operator<=>(const ScaleValue& other) const;
  bool operator==(const ScaleValue& other) const;

  /// Rational bounds with relative gap about 2^-bits.
  Rational lower_bound(unsigned bits = 40) const;
  Rational upper_bound(unsigned bits = 40) const;

  /// Natural logarithm, correctly computed at 256 bits and rounded to double.
  double log() const;
  /// Value rounded to double.
  double to_double() const;
  /// Decimal rendering with the given significant digits (default 15).
  std::string to_decimal(int digits = 15) const;
  /// Exact rendering "q*(rho)^(1/D)" or "q".
  std::string to_exact_string() const;

 private:
  void normalize();
  std::strong_ordering exact_compare(const ScaleValue& other) const;

  Rational coef_;
  Rational rad_;
  unsigned long deg_;
  double log_hint_;  // approximate log, for cheap comparisons
};

std::ostream& operator<<(std::ostream& os, const ScaleValue& value);

/// ln(a) / (scale * ln(b)) evaluated at 256 bits, rounded once to double.
/// Requires b != 1.
double log_quotient(const ScaleValue& a, const ScaleValue& b, const Rational& scale = Rational(1));

ScaleValue max(const ScaleValue& a, const ScaleValue& b);
ScaleValue min(const ScaleValue& a, const ScaleValue& b);

}  // namespace minflow
