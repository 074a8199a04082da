#include "minflow/scale_value.hpp"

#include <mpfr.h>

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace minflow {

namespace {

constexpr mpfr_prec_t kPrec = 256;

double approx_log(const Integer& x) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * 0.69314718055994530942;
}

double approx_log(const Rational& x) {
  return approx_log(Integer(x.get_num())) - approx_log(Integer(x.get_den()));
}

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, kPrec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// log(coef) + log(rad)/deg at kPrec bits.
void exact_log(const Rational& coef, const Rational& rad, unsigned long deg, mpfr_ptr out) {
  Mpfr a, b;
  mpfr_set_q(a.get(), coef.get_mpq_t(), MPFR_RNDN);
  mpfr_log(a.get(), a.get(), MPFR_RNDN);
  mpfr_set_q(b.get(), rad.get_mpq_t(), MPFR_RNDN);
  mpfr_log(b.get(), b.get(), MPFR_RNDN);
  mpfr_div_ui(b.get(), b.get(), deg, MPFR_RNDN);
  mpfr_add(out, a.get(), b.get(), MPFR_RNDN);
}

}  // namespace

ScaleValue::ScaleValue() : ScaleValue(Rational(1)) {}

ScaleValue::ScaleValue(const Rational& value) : coef_(value), rad_(1), deg_(1) {
  if (coef_ <= 0) throw std::domain_error("ScaleValue must be positive");
  log_hint_ = approx_log(coef_);
}

ScaleValue::ScaleValue(const Rational& coefficient, const Rational& radicand, unsigned long degree)
    : coef_(coefficient), rad_(radicand), deg_(degree) {
  if (coef_ <= 0 || rad_ <= 0) throw std::domain_error("ScaleValue must be positive");
  if (deg_ == 0) throw std::domain_error("ScaleValue root degree must be positive");
  normalize();
}

void ScaleValue::normalize() {
  coef_.canonicalize();
  rad_.canonicalize();
  if (rad_ == 1) deg_ = 1;
  // Lower the root degree while the radicand is a perfect power of a factor of it.
  for (unsigned long f = 2; f <= deg_;) {
    Rational root;
    if (deg_ % f == 0 && exact_root(rad_, f, root)) {
      rad_ = root;
      deg_ /= f;
    } else {
      ++f;
    }
  }
  if (deg_ == 1 && rad_ != 1) {
    coef_ *= rad_;
    rad_ = 1;
  }
  log_hint_ = approx_log(coef_) + approx_log(rad_) / static_cast<double>(deg_);
}

Rational ScaleValue::as_rational() const {
  if (deg_ != 1) throw std::logic_error("ScaleValue is not rational: " + to_exact_string());
  return coef_;
}

std::pair<Rational, Rational> ScaleValue::with_degree(unsigned long degree) const {
  if (degree == 0 || degree % deg_ != 0)
    throw std::invalid_argument("requested root degree is not a multiple of the current one");
  return {coef_, minflow::pow(rad_, static_cast<long>(degree / deg_))};
}

ScaleValue ScaleValue::operator*(const ScaleValue& other) const {
  unsigned long d = std::lcm(deg_, other.deg_);
  return ScaleValue(coef_ * other.coef_,
                    minflow::pow(rad_, static_cast<long>(d / deg_)) *
                        minflow::pow(other.rad_, static_cast<long>(d / other.deg_)),
                    d);
}

ScaleValue ScaleValue::operator/(const ScaleValue& other) const {
  unsigned long d = std::lcm(deg_, other.deg_);
  return ScaleValue(coef_ / other.coef_,
                    minflow::pow(rad_, static_cast<long>(d / deg_)) /
                        minflow::pow(other.rad_, static_cast<long>(d / other.deg_)),
                    d);
}

ScaleValue ScaleValue::scaled(const Rational& r) const {
  if (r <= 0) throw std::domain_error("ScaleValue must be positive");
  ScaleValue out = *this;
  out.coef_ *= r;
  out.log_hint_ += approx_log(r);
  return out;
}

ScaleValue ScaleValue::pow(long exponent) const {
  return ScaleValue(minflow::pow(coef_, exponent), minflow::pow(rad_, exponent), deg_);
}

ScaleValue ScaleValue::pow(long num, unsigned long den) const {
  if (den == 0) throw std::domain_error("zero root degree");
  if (den == 1) return pow(num);
  // (coef^deg * rad)^(num / (den * deg))
  Rational base = minflow::pow(coef_, static_cast<long>(deg_)) * rad_;
  return ScaleValue(Rational(1), minflow::pow(base, num), den * deg_);
}

std::strong_ordering ScaleValue::exact_compare(const ScaleValue& other) const {
  if (deg_ == 1 && other.deg_ == 1) {
    int c = cmp(coef_, other.coef_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  unsigned long d = std::lcm(deg_, other.deg_);
  Rational lhs = minflow::pow(coef_, static_cast<long>(d)) * minflow::pow(rad_, static_cast<long>(d / deg_));
  Rational rhs = minflow::pow(other.coef_, static_cast<long>(d)) *
                 minflow::pow(other.rad_, static_cast<long>(d / other.deg_));
  int c = cmp(lhs, rhs);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::strong_ordering ScaleValue::operator<=>(const ScaleValue& other) const {
  double gap = log_hint_ - other.log_hint_;
  double tol = 1e-9 * (1.0 + std::fabs(log_hint_) + std::fabs(other.log_hint_));
  if (gap > tol) return std::strong_ordering::greater;
  if (gap < -tol) return std::strong_ordering::less;
  return exact_compare(other);
}

bool ScaleValue::operator==(const ScaleValue& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

Rational ScaleValue::lower_bound(unsigned bits) const {
  if (deg_ == 1) return coef_;
  // rad^(1/D) = (a * b^(D-1))^(1/D) / b for rad = a/b
  Integer a = rad_.get_num(), b = rad_.get_den();
  Integer n = a * minflow::pow(b, deg_ - 1);
  n <<= bits * deg_;
  Integer r = iroot_floor(n, deg_);
  return coef_ * Rational(r, b << bits);
}

Rational ScaleValue::upper_bound(unsigned bits) const {
  if (deg_ == 1) return coef_;
  Integer a = rad_.get_num(), b = rad_.get_den();
  Integer n = a * minflow::pow(b, deg_ - 1);
  n <<= bits * deg_;
  Integer r = iroot_floor(n, deg_);
  return coef_ * Rational(r + 1, b << bits);
}

double ScaleValue::log() const {
  Mpfr v;
  exact_log(coef_, rad_, deg_, v.get());
  return mpfr_get_d(v.get(), MPFR_RNDN);
}

double ScaleValue::to_double() const {
  Mpfr v;
  exact_log(coef_, rad_, deg_, v.get());
  mpfr_exp(v.get(), v.get(), MPFR_RNDN);
  return mpfr_get_d(v.get(), MPFR_RNDN);
}

std::string ScaleValue::to_decimal(int digits) const {
  Mpfr v;
  if (deg_ == 1) {
    mpfr_set_q(v.get(), coef_.get_mpq_t(), MPFR_RNDN);
  } else {
    exact_log(coef_, rad_, deg_, v.get());
    mpfr_exp(v.get(), v.get(), MPFR_RNDN);
  }
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Rg", digits, v.get());
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

std::string ScaleValue::to_exact_string() const {
  if (deg_ == 1) return to_string(coef_);
  return to_string(coef_) + "*(" + to_string(rad_) + ")^(1/" + std::to_string(deg_) + ")";
}

double log_quotient(const ScaleValue& a, const ScaleValue& b, const Rational& scale) {
  Mpfr x, y, c;
  exact_log(a.coefficient(), a.radicand(), a.degree(), x.get());
  exact_log(b.coefficient(), b.radicand(), b.degree(), y.get());
  if (mpfr_zero_p(y.get())) throw std::domain_error("log_quotient: logarithm of the base is zero");
  mpfr_set_q(c.get(), scale.get_mpq_t(), MPFR_RNDN);
  mpfr_mul(y.get(), y.get(), c.get(), MPFR_RNDN);
  mpfr_div(x.get(), x.get(), y.get(), MPFR_RNDN);
  return mpfr_get_d(x.get(), MPFR_RNDN);
}

std::ostream& operator<<(std::ostream& os, const ScaleValue& value) {
  return os << value.to_exact_string();
}

ScaleValue max(const ScaleValue& a, const ScaleValue& b) { return a < b ? b : a; }
ScaleValue min(const ScaleValue& a, const ScaleValue& b) { return b < a ? b : a; }

}  // namespace minflow
