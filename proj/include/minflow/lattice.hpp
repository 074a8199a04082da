// Approximation lattices, weight-vector paths and boxes.
#pragma once

#include "minflow/numbers.hpp"
#include "minflow/rational.hpp"
#include "minflow/scale_value.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace minflow {

/// Dense square matrix of rationals, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t d) : d_(d), a_(d * d, Rational(0)) {}
  static Matrix identity(std::size_t d);

  std::size_t dim() const { return d_; }
  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * d_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * d_ + c]; }

  RatVector column(std::size_t c) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  RatVector operator*(const RatVector& v) const;
  /// Product with an integer vector.
  RatVector apply(const IntVector& v) const;
  bool operator==(const Matrix& other) const { return d_ == other.d_ && a_ == other.a_; }

  Rational determinant() const;
  /// Throws std::domain_error when singular.
  Matrix inverse() const;
  bool is_integral() const;

 private:
  std::size_t d_ = 0;
  RatVector a_;
};

enum class LatticeLabel { primal, dual, custom };

/// Lattice generated by the columns of `basis`.
struct Lattice {
  Matrix basis;
  LatticeLabel label = LatticeLabel::custom;

  std::size_t dim() const { return basis.dim(); }
  /// Constructors for primal/dual lattices verify this is exactly one.
  Rational covolume() const { return abs(basis.determinant()); }
};

/// Line-oriented text: "d" then d rows of d rationals.
void write_lattice(std::ostream& os, const Lattice& lattice);
Lattice read_lattice(std::istream& is);

/// n x m matrix Theta of exactly described reals; d = m + n.
struct ThetaSpec {
  int m = 1;
  int n = 1;
  std::vector<RealSpec> entries;  // row-major n x m

  int dim() const { return m + n; }
  const RealSpec& at(int row, int col) const { return entries[static_cast<std::size_t>(row * m + col)]; }
  /// Entries approximated within `faithfulness`, row-major.
  RatVector approximate(const Rational& faithfulness) const;
  void validate() const;
};

/// Linear weight path: tau_i(s) = w_i ln(u) with s = c ln(u).
struct PathSpec {
  std::vector<long> weights;
  Rational scale = 1;

  std::size_t dim() const { return weights.size(); }
  /// s for a given u, in double precision (reporting only).
  double s_at(const ScaleValue& u) const;
  /// Smallest rational u with s_at(u) >= s, to within 2^-20 relative.
  Rational u_for_s(double s) const;
};

/// tau_1..tau_m = s, the rest -m s/n.
PathSpec primal_path(int m, int n);
/// tau_1..tau_m = -n s, the rest m s (the dual flow used for m = 1).
PathSpec dual_path(int m, int n);

/// Half-widths of the box; B = { |z_i| <= h_i }.
struct Box {
  std::vector<ScaleValue> h;
  std::size_t dim() const { return h.size(); }
  ScaleValue volume_factor() const;  // prod h_i
};

/// Basis T_Theta^{-1} = [[E_m, 0], [-Theta, E_n]] with Theta approximated
/// within faithfulness.
Lattice primal_lattice(const ThetaSpec& theta, const Rational& faithfulness);
/// Basis T_Theta^T = [[E_m, Theta^T], [0, E_n]].
Lattice dual_lattice(const ThetaSpec& theta, const Rational& faithfulness);
/// Same constructions from already-approximated entries (row-major n x m).
Lattice primal_lattice(int m, int n, const RatVector& theta);
Lattice dual_lattice(int m, int n, const RatVector& theta);

/// count rationals from lo to hi (both included), evenly spaced in log scale
/// and rounded to about 24 significant bits; strictly increasing.
std::vector<Rational> geometric_grid(const Rational& lo, const Rational& hi, std::size_t count);

/// h_i = u^{w_i}; rejects u <= 1.
Box box_at(const PathSpec& path, const ScaleValue& u);

}  // namespace minflow
