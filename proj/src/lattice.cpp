#include "minflow/lattice.hpp"

#include <mpfr.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace minflow {

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
  return m;
}

RatVector Matrix::column(std::size_t c) const {
  RatVector out(d_);
  for (std::size_t r = 0; r < d_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(d_);
  for (std::size_t r = 0; r < d_; ++r)
    for (std::size_t c = 0; c < d_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (d_ != other.d_) throw std::invalid_argument("matrix dimension mismatch");
  Matrix out(d_);
  for (std::size_t r = 0; r < d_; ++r)
    for (std::size_t k = 0; k < d_; ++k) {
      if ((*this)(r, k) == 0) continue;
      for (std::size_t c = 0; c < d_; ++c) out(r, c) += (*this)(r, k) * other(k, c);
    }
  return out;
}

RatVector Matrix::operator*(const RatVector& v) const {
  if (v.size() != d_) throw std::invalid_argument("matrix/vector dimension mismatch");
  RatVector out(d_, Rational(0));
  for (std::size_t r = 0; r < d_; ++r)
    for (std::size_t c = 0; c < d_; ++c)
      if (v[c] != 0) out[r] += (*this)(r, c) * v[c];
  return out;
}

RatVector Matrix::apply(const IntVector& v) const {
  if (v.size() != d_) throw std::invalid_argument("matrix/vector dimension mismatch");
  RatVector out(d_, Rational(0));
  for (std::size_t r = 0; r < d_; ++r)
    for (std::size_t c = 0; c < d_; ++c)
      if (v[c] != 0) out[r] += (*this)(r, c) * Rational(v[c]);
  return out;
}

Rational Matrix::determinant() const {
  Matrix a = *this;
  Rational det = 1;
  for (std::size_t col = 0; col < d_; ++col) {
    std::size_t pivot = col;
    while (pivot < d_ && a(pivot, col) == 0) ++pivot;
    if (pivot == d_) return 0;
    if (pivot != col) {
      for (std::size_t c = 0; c < d_; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < d_; ++r) {
      if (a(r, col) == 0) continue;
      Rational f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < d_; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

Matrix Matrix::inverse() const {
  Matrix a = *this, inv = identity(d_);
  for (std::size_t col = 0; col < d_; ++col) {
    std::size_t pivot = col;
    while (pivot < d_ && a(pivot, col) == 0) ++pivot;
    if (pivot == d_) throw std::domain_error("singular matrix");
    for (std::size_t c = 0; c < d_; ++c) {
      std::swap(a(pivot, c), a(col, c));
      std::swap(inv(pivot, c), inv(col, c));
    }
    Rational p = a(col, col);
    for (std::size_t c = 0; c < d_; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (std::size_t r = 0; r < d_; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rational f = a(r, col);
      for (std::size_t c = 0; c < d_; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

bool Matrix::is_integral() const {
  for (const auto& x : a_)
    if (x.get_den() != 1) return false;
  return true;
}

void write_lattice(std::ostream& os, const Lattice& lattice) {
  const std::size_t d = lattice.dim();
  os << d << '\n';
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) os << (c ? " " : "") << to_string(lattice.basis(r, c));
    os << '\n';
  }
}

Lattice read_lattice(std::istream& is) {
  std::string line;
  auto next_line = [&]() {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("lattice file: missing dimension line");
  Rational dim = parse_rational(line);
  if (dim.get_den() != 1 || dim < 1) throw std::invalid_argument("lattice file: bad dimension");
  const std::size_t d = dim.get_num().get_ui();
  Lattice out{Matrix(d), LatticeLabel::custom};
  for (std::size_t r = 0; r < d; ++r) {
    if (!next_line()) throw std::invalid_argument("lattice file: missing row " + std::to_string(r));
    std::istringstream row(line);
    std::string token;
    std::size_t c = 0;
    while (row >> token) {
      if (c >= d) throw std::invalid_argument("lattice file: too many entries in row " + std::to_string(r));
      out.basis(r, c++) = parse_rational(token);
    }
    if (c != d) throw std::invalid_argument("lattice file: too few entries in row " + std::to_string(r));
  }
  if (out.basis.determinant() == 0) throw std::invalid_argument("lattice file: singular basis");
  return out;
}

void ThetaSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (entries.size() != static_cast<std::size_t>(m * n))
    throw std::invalid_argument("Theta needs n*m = " + std::to_string(m * n) + " entries, got " +
                                std::to_string(entries.size()));
}

RatVector ThetaSpec::approximate(const Rational& faithfulness) const {
  validate();
  if (faithfulness <= 0) throw std::invalid_argument("faithfulness must be positive");
  RatVector out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(minflow::approximate(e, faithfulness).value);
  return out;
}

double PathSpec::s_at(const ScaleValue& u) const { return scale.get_d() * u.log(); }

Rational PathSpec::u_for_s(double s) const {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_d(x, s, MPFR_RNDN);
  mpfr_div_d(x, x, scale.get_d(), MPFR_RNDN);
  mpfr_exp(x, x, MPFR_RNDU);
  mpfr_mul_2ui(x, x, 20, MPFR_RNDU);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDU);
  mpfr_clear(x);
  Rational out(z, Integer(1) << 20);
  out.canonicalize();
  return out;
}

std::vector<Rational> geometric_grid(const Rational& lo, const Rational& hi, std::size_t count) {
  if (!(lo < hi) || lo <= 0) throw std::invalid_argument("geometric_grid needs 0 < lo < hi");
  if (count < 2) throw std::invalid_argument("geometric_grid needs at least two points");
  std::vector<Rational> out{lo};
  mpfr_t a, b, x;
  mpfr_inits2(256, a, b, x, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(a, lo.get_mpq_t(), MPFR_RNDN);
  mpfr_log(a, a, MPFR_RNDN);
  mpfr_set_q(b, hi.get_mpq_t(), MPFR_RNDN);
  mpfr_log(b, b, MPFR_RNDN);
  mpfr_sub(b, b, a, MPFR_RNDN);
  for (std::size_t i = 1; i + 1 < count; ++i) {
    mpfr_mul_ui(x, b, static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_div_ui(x, x, static_cast<unsigned long>(count - 1), MPFR_RNDN);
    mpfr_add(x, x, a, MPFR_RNDN);
    mpfr_exp(x, x, MPFR_RNDN);
    long e = mpfr_get_exp(x);
    mpfr_mul_2si(x, x, 24 - e, MPFR_RNDN);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDN);
    Rational q = Rational(z) * pow2(e - 24);
    if (out.back() < q && q < hi) out.push_back(q);
  }
  mpfr_clears(a, b, x, static_cast<mpfr_ptr>(nullptr));
  out.push_back(hi);
  return out;
}

PathSpec primal_path(int m, int n) {
  PathSpec p;
  for (int i = 0; i < m; ++i) p.weights.push_back(n);
  for (int i = 0; i < n; ++i) p.weights.push_back(-m);
  p.scale = n;
  return p;
}

PathSpec dual_path(int m, int n) {
  PathSpec p;
  for (int i = 0; i < m; ++i) p.weights.push_back(-n);
  for (int i = 0; i < n; ++i) p.weights.push_back(m);
  p.scale = m;
  return p;
}

ScaleValue Box::volume_factor() const {
  ScaleValue v;
  for (const auto& x : h) v *= x;
  return v;
}

Lattice primal_lattice(int m, int n, const RatVector& theta) {
  const std::size_t d = static_cast<std::size_t>(m + n);
  if (theta.size() != static_cast<std::size_t>(m * n)) throw std::invalid_argument("Theta size mismatch");
  Lattice out{Matrix::identity(d), LatticeLabel::primal};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) out.basis(static_cast<std::size_t>(m + r), static_cast<std::size_t>(c)) = -theta[r * m + c];
  if (out.basis.determinant() != 1) throw std::logic_error("primal lattice is not unimodular");
  return out;
}

Lattice dual_lattice(int m, int n, const RatVector& theta) {
  const std::size_t d = static_cast<std::size_t>(m + n);
  if (theta.size() != static_cast<std::size_t>(m * n)) throw std::invalid_argument("Theta size mismatch");
  Lattice out{Matrix::identity(d), LatticeLabel::dual};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) out.basis(static_cast<std::size_t>(c), static_cast<std::size_t>(m + r)) = theta[r * m + c];
  if (out.basis.determinant() != 1) throw std::logic_error("dual lattice is not unimodular");
  return out;
}

Lattice primal_lattice(const ThetaSpec& theta, const Rational& faithfulness) {
  return primal_lattice(theta.m, theta.n, theta.approximate(faithfulness));
}

Lattice dual_lattice(const ThetaSpec& theta, const Rational& faithfulness) {
  return dual_lattice(theta.m, theta.n, theta.approximate(faithfulness));
}

Box box_at(const PathSpec& path, const ScaleValue& u) {
  if (u <= ScaleValue(Rational(1))) throw std::invalid_argument("box_at needs u > 1");
  Box b;
  b.h.reserve(path.dim());
  for (long w : path.weights) b.h.push_back(u.pow(w));
  return b;
}

}  // namespace minflow
