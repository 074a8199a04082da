#include "minflow/minima.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace minflow;

namespace {

Box rational_box(const RatVector& h) {
  Box b;
  for (const auto& x : h) b.h.emplace_back(x);
  return b;
}

Lattice from_columns(const std::vector<RatVector>& cols) {
  Lattice l;
  l.basis = Matrix(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < cols.size(); ++r) l.basis(r, c) = cols[c][r];
  return l;
}

// Unimodular integer matrix from a few random shears, then a rational Theta part.
Lattice random_lattice(std::mt19937_64& rng, std::size_t d) {
  Matrix m = Matrix::identity(d);
  std::uniform_int_distribution<std::size_t> idx(0, d - 1);
  std::uniform_int_distribution<long> coef(-2, 2);
  for (int s = 0; s < 4; ++s) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    Matrix e = Matrix::identity(d);
    e(i, j) = coef(rng);
    m = m * e;
  }
  std::uniform_int_distribution<long> num(-40, 40), den(1, 13);
  Matrix t = Matrix::identity(d);
  for (std::size_t r = 1; r < d; ++r) t(r, 0) = Rational(num(rng), den(rng));
  Lattice l;
  l.basis = t * m;
  return l;
}

bool check_against_oracle(const Lattice& l, const RatVector& h, std::size_t p, long cap) {
  auto certified = oracle::certified_minima(l.basis, h, p, cap);
  if (!certified) return false;
  const oracle::Minima& want = *certified;
  MinimaResult got = successive_minima(l, rational_box(h), p);
  for (std::size_t k = 0; k < p; ++k) {
    CHECK(got.lambdas[k] == ScaleValue(want.lambdas[k]));
    CHECK(got.witnesses[k].coords == want.witnesses[k]);
  }
  return true;
}

}  // namespace

TEST_CASE("box_norm") {
  Box b = rational_box({2, Rational(1, 2)});
  CHECK(box_norm(LatticePoint{{1, 0}, {1, 0}}, b) == ScaleValue(Rational(1, 2)));
  Box c = rational_box({3, Rational(1, 3)});
  CHECK(box_norm(LatticePoint{{3, 0}, {3, 0}}, c) == ScaleValue(Rational(1)));
  CHECK(box_norm(LatticePoint{{1, 0}, {1, Rational(-1, 3)}}, c) == ScaleValue(Rational(1)));
  CHECK_THROWS_AS(box_norm(LatticePoint{{0, 0}, {0, 0}}, c), std::invalid_argument);
}

TEST_CASE("enumerate_in_box small cases") {
  Lattice z2;
  z2.basis = Matrix::identity(2);
  auto pts = enumerate_in_box(z2, rational_box({1, 1}), ScaleValue(Rational(1)));
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].coords == IntVector{0, 1});
  CHECK(pts[1].coords == IntVector{1, -1});
  CHECK(pts[2].coords == IntVector{1, 0});
  CHECK(pts[3].coords == IntVector{1, 1});
  CHECK(enumerate_in_box(z2, rational_box({Rational(1, 2), Rational(1, 2)}), ScaleValue(Rational(1))).empty());

  Lattice third = primal_lattice(1, 1, {Rational(1, 3)});
  RatVector h{3, Rational(1, 3)};
  auto got = enumerate_in_box(third, rational_box(h), ScaleValue(Rational(1)));
  auto want = oracle::brute_points(third.basis, h, 1, 4);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].coords == want[i]);
    CHECK(got[i].z == oracle::image(third.basis, want[i]));
  }
}

TEST_CASE("successive minima, closed-form cases") {
  Lattice z2;
  z2.basis = Matrix::identity(2);
  MinimaResult r = successive_minima(z2, rational_box({2, Rational(1, 2)}), 2);
  CHECK(r.lambdas[0] == ScaleValue(Rational(1, 2)));
  CHECK(r.lambdas[1] == ScaleValue(Rational(2)));
  CHECK(r.witnesses[0].coords == IntVector{1, 0});
  CHECK(r.witnesses[1].coords == IntVector{0, 1});

  Lattice third = primal_lattice(1, 1, {Rational(1, 3)});
  MinimaResult t = successive_minima(third, rational_box({3, Rational(1, 3)}), 2);
  CHECK(t.lambdas[0] == ScaleValue(Rational(1)));
  CHECK(t.lambdas[1] == ScaleValue(Rational(1)));
  // three points reach norm 1: coordinates (1, 0), (2, 1), (3, 1); ties go
  // to the smallest coordinates
  CHECK(t.witnesses[0].coords == IntVector{1, 0});
  CHECK(t.witnesses[1].coords == IntVector{2, 1});
  CHECK(t.witnesses[1].z == RatVector{2, Rational(1, 3)});

  Lattice z3;
  z3.basis = Matrix::identity(3);
  MinimaResult u = successive_minima(z3, rational_box({4, Rational(1, 2), Rational(1, 2)}), 3);
  CHECK(u.lambdas[0] == ScaleValue(Rational(1, 4)));
  CHECK(u.lambdas[1] == ScaleValue(Rational(2)));
  CHECK(u.lambdas[2] == ScaleValue(Rational(2)));

  CHECK_THROWS_AS(successive_minima(z3, rational_box({1, 1, 1}), 4), std::invalid_argument);
  CHECK_THROWS_AS(successive_minima(z3, rational_box({1, 1}), 1), std::invalid_argument);
}

TEST_CASE("generic engine matches brute force on random lattices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> hn(1, 12), hd(1, 6);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    Lattice l = random_lattice(rng, d);
    RatVector h;
    for (std::size_t i = 0; i < d; ++i) h.push_back(Rational(hn(rng), hd(rng)));
    CAPTURE(trial);
    if (check_against_oracle(l, h, d, d == 2 ? 200 : 24)) ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("scan reference and generic engine agree") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 97), u(4, 120);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial % 2);
    RatVector theta;
    for (std::size_t j = 0; j < n; ++j) theta.emplace_back(num(rng), den(rng));
    Lattice l = primal_lattice(1, static_cast<int>(n), theta);
    Box b = box_at(primal_path(1, static_cast<int>(n)), ScaleValue(Rational(u(rng), 3)));
    MinimaResult fast = scan_minima(theta, b, n + 1);
    MinimaResult gen = successive_minima(l, b, n + 1);
    CAPTURE(trial);
    for (std::size_t k = 0; k <= n; ++k) {
      CHECK(fast.lambdas[k] == gen.lambdas[k]);
      CHECK(fast.witnesses[k].coords == gen.witnesses[k].coords);
      CHECK(fast.witnesses[k].z == gen.witnesses[k].z);
    }
  }
}

TEST_CASE("properties: monotone, witnesses on the boundary, Minkowski band, sign symmetry") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> un(3, 300);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    Lattice l = random_lattice(rng, d);
    // irrational unit-volume box
    ScaleValue u(Rational(un(rng), 7), Rational(un(rng), 5), static_cast<unsigned long>(d));
    if (!(ScaleValue(Rational(1)) < u)) continue;
    PathSpec path;
    path.weights.assign(d, -1);
    path.weights[0] = static_cast<long>(d) - 1;
    Box b = box_at(path, u);
    MinimaResult r = successive_minima(l, b, d);
    ScaleValue prod(Rational(1));
    std::vector<IntVector> ws;
    for (std::size_t k = 0; k < d; ++k) {
      if (k) CHECK_FALSE(r.lambdas[k] < r.lambdas[k - 1]);
      CHECK(box_norm(r.witnesses[k], b) == r.lambdas[k]);
      prod *= r.lambdas[k];
      ws.push_back(r.witnesses[k].coords);
    }
    CHECK(oracle::rank(ws) == d);
    Rational fact = 1;
    for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<long>(k);
    CHECK_FALSE(prod < ScaleValue(Rational(1) / fact));
    CHECK_FALSE(ScaleValue(Rational(1)) < prod);

    Lattice flipped = l;
    for (std::size_t r2 = 0; r2 < d; ++r2) flipped.basis(r2, 1) = -flipped.basis(r2, 1);
    MinimaResult f = successive_minima(flipped, b, d);
    for (std::size_t k = 0; k < d; ++k) CHECK(f.lambdas[k] == r.lambdas[k]);
  }
}

TEST_CASE("large aspect ratios stay cheap") {
  // golden ratio convergent lattice with u near e^25
  Rational theta(Integer("225851433717"), Integer("139583862445"));
  Lattice l = primal_lattice(1, 1, {theta});
  Box b = box_at(primal_path(1, 1), ScaleValue(Rational(Integer("72004899337"))));
  MinimaResult r = successive_minima(l, b, 2, EnumerationBudget{200000});
  CHECK(r.lambdas[0] < ScaleValue(Rational(3)));
  CHECK(ScaleValue(Rational(1, 3)) < r.lambdas[0]);
  CHECK(r.lambdas[1] < ScaleValue(Rational(3)));
}

TEST_CASE("budget is enforced") {
  Lattice z2;
  z2.basis = Matrix::identity(2);
  CHECK_THROWS_AS(enumerate_in_box(z2, rational_box({1, 1}), ScaleValue(Rational(1000)), EnumerationBudget{100}),
                  BudgetExceeded);
}
