// Exact descriptions of real numbers and their rational approximants.
#pragma once

#include "minflow/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace minflow {

struct RationalValue {
  Rational value;
  /// Set when the value came from a decimal literal standing in for an
  /// irrational; exponents of such inputs are degenerate.
  bool from_literal = false;
};

/// [preperiod; (period)] with a non-empty period.
struct PeriodicCF {
  IntVector preperiod;
  IntVector period;
};

/// sum_{k >= 1} base^(-k!)
struct LiouvilleSeries {
  unsigned long base = 10;
};

class RealSpec {
 public:
  using Variant = std::variant<RationalValue, PeriodicCF, LiouvilleSeries>;

  RealSpec(RationalValue v);    // NOLINT
  RealSpec(PeriodicCF v);       // NOLINT
  RealSpec(LiouvilleSeries v);  // NOLINT

  static RealSpec rational(const Rational& value) { return RealSpec(RationalValue{value}); }

  const Variant& variant() const { return v_; }
  bool is_rational() const { return std::holds_alternative<RationalValue>(v_); }

  /// k-th partial quotient; throws std::out_of_range past the end of a finite
  /// expansion and std::invalid_argument for Liouville series.
  Integer partial_quotient(std::size_t k) const;
  /// Number of partial quotients, or nullopt when infinite.
  std::optional<std::size_t> cf_length() const;

 private:
  Variant v_;
  IntVector finite_cf_;  // expansion of a rational value
};

struct Approximation {
  Rational value;
  Rational error_bound;  // certified |theta - value| <= error_bound
};

/// p_k/q_k of the continued fraction of spec.
Rational cf_convergent(const RealSpec& spec, std::size_t k);

/// Rational r with |theta - r| <= eps, together with the certified bound.
Approximation approximate(const RealSpec& spec, const Rational& eps);

/// Text syntax: rat:<p>/<q>, cf:[a0;a1,...(p1,...)], liouville:<base>, or a
/// bare decimal/fraction literal (taken as the rational it spells).
RealSpec parse_real_spec(std::string_view text);
std::string to_string(const RealSpec& spec);

/// Continued fraction expansion of a rational number.
IntVector rational_cf(const Rational& value);

/// a + b*sqrt(s) with s squarefree (s = 1 and b = 0 for rationals).
struct QuadraticForm {
  Rational a;
  Rational b;
  Integer s;
};

/// Exact closed form for rational and periodic continued-fraction specs.
std::optional<QuadraticForm> quadratic_form(const RealSpec& spec);

/// dim_Q span_Q(1, theta_1, ..., theta_n) when every entry has a quadratic
/// closed form, nullopt otherwise.
std::optional<int> rational_span_dimension(const std::vector<RealSpec>& thetas);

}  // namespace minflow
