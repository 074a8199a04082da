#include "minflow/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace minflow {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!is_digits(body)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  Integer out;
  out.set_str(std::string(body), 10);
  if (!s.empty() && s.front() == '-') out = -out;
  return out;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_integer(s.substr(e + 1)).get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw std::invalid_argument("malformed decimal literal");
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!is_digits(s)) throw std::invalid_argument("malformed decimal literal");
    digits = std::string(s);
  }
  Integer mantissa(digits, 10);
  Rational out(mantissa);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0)
    out *= scale;
  else
    out /= scale;
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

Integer floor(const Rational& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& value) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Integer round_nearest(const Rational& value) { return floor(value + Rational(1, 2)); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational pow(const Rational& base, long exponent) {
  unsigned long k = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Rational out(pow(Integer(base.get_num()), k), pow(Integer(base.get_den()), k));
  if (exponent < 0) {
    if (out == 0) throw std::domain_error("negative power of zero");
    out = 1 / out;
  }
  out.canonicalize();
  return out;
}

Integer iroot_floor(const Integer& x, unsigned long k) {
  if (x < 0) throw std::domain_error("root of a negative integer");
  Integer out;
  mpz_root(out.get_mpz_t(), x.get_mpz_t(), k);
  return out;
}

bool exact_root(const Integer& x, unsigned long k, Integer& root) {
  if (x < 0) return false;
  return mpz_root(root.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

bool exact_root(const Rational& x, unsigned long k, Rational& root) {
  Integer n, d;
  if (!exact_root(Integer(x.get_num()), k, n) || !exact_root(Integer(x.get_den()), k, d)) return false;
  root = Rational(n, d);
  root.canonicalize();
  return true;
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
  if (x < 0) throw std::domain_error("sqrt of a negative rational");
  if (x == 0) return 0;
  // sqrt(a/b) = sqrt(a * b * 4^bits) / (b * 2^bits)
  Integer scaled = Integer(x.get_num()) * Integer(x.get_den());
  scaled <<= 2 * bits;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  Integer den = Integer(x.get_den()) << bits;
  Rational out(r + 1, den);
  out.canonicalize();
  return out;
}

Rational pow2(long e) {
  Integer one = 1;
  if (e >= 0) return Rational(Integer(one << static_cast<unsigned long>(e)));
  return Rational(one, Integer(one << static_cast<unsigned long>(-e)));
}

long floor_log2(const Rational& x) {
  if (x <= 0) throw std::domain_error("log2 of non-positive rational");
  long guess = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2)) -
               static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  while (pow2(guess) > x) --guess;
  while (pow2(guess + 1) <= x) ++guess;
  return guess;
}

}  // namespace minflow
