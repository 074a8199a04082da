#include "minflow/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace minflow;

namespace {

LemmaInstance square(const Rational& lambda, std::size_t p, IntVector v) {
  LemmaInstance in;
  in.lattice.basis = Matrix::identity(2);
  in.h = {Rational(1), Rational(1)};
  in.lambda = lambda;
  in.p = p;
  in.v = std::move(v);
  return in;
}

ThetaSpec theta_of(std::vector<std::string> texts) {
  ThetaSpec t;
  t.m = 1;
  t.n = static_cast<int>(texts.size());
  for (const auto& s : texts) t.entries.push_back(parse_real_spec(s));
  return t;
}

}  // namespace

TEST_CASE("random unimodular lattices") {
  for (std::size_t d : {2UL, 3UL, 4UL}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
      Lattice a = random_unimodular_lattice(seed, d, 5);
      CHECK(abs(a.basis.determinant()) == 1);
      CHECK(a.basis.is_integral());
      CHECK(random_unimodular_lattice(seed, d, 5).basis == a.basis);
      // each shear multiplies the largest entry by at most 1 + bound
      Rational cap = pow(Rational(6), static_cast<long>(d + 1));
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) CHECK(abs(a.basis(r, c)) <= cap);
    }
    CHECK_FALSE(random_unimodular_lattice(1, d, 5, 8).basis == random_unimodular_lattice(2, d, 5, 8).basis);
  }
  CHECK(split_seed(7, 0) != split_seed(7, 1));
  CHECK(split_seed(7, 3) == split_seed(7, 3));
}

TEST_CASE("lemma on the identity instance") {
  LemmaReport r = lemma_core_check(square(1, 2, {1, 0}));
  REQUIRE(r.constructed.size() == 1);
  CHECK(r.constructed[0] == IntVector{0, 1});
  CHECK(r.pass());
  CHECK(r.strict);

  // partner (3, 1) in 3 P1 collapses onto the axis, with multiplier equal to lambda
  LemmaReport t = lemma_core_check(square(3, 2, {1, 0}), {IntVector{3, 1}});
  CHECK(t.multipliers[0] == 3);
  CHECK(t.constructed[0] == IntVector{0, 1});
  CHECK(t.pass());
  CHECK_FALSE(t.strict);

  // sign normalization of the partner
  LemmaReport s = lemma_core_check(square(3, 2, {1, 0}), {IntVector{-2, 1}});
  CHECK(s.constructed[0] == IntVector{0, -1});
  CHECK(s.pass());
}

TEST_CASE("hypothesis violations are rejected") {
  CHECK_THROWS_AS(lemma_core_check(square(1, 2, {0, 1})), HypothesisViolation);
  CHECK_THROWS_AS(lemma_core_check(square(Rational(1, 2), 2, {1, 0})), HypothesisViolation);
  CHECK_THROWS_AS(lemma_core_check(square(1, 3, {1, 0})), HypothesisViolation);
  CHECK_THROWS_AS(lemma_core_check(square(1, 2, {1, 0}), {IntVector{2, 1}}), HypothesisViolation);
  CHECK_THROWS_AS(lemma_core_check(square(2, 2, {1, 0}), {IntVector{2, 0}}), HypothesisViolation);
  LemmaInstance outside = square(1, 2, {1, 2});
  CHECK_THROWS_AS(lemma_core_check(outside), HypothesisViolation);
  // P2 too small for p = 2
  LemmaInstance thin = square(1, 2, {1, 0});
  thin.h = {Rational(1), Rational(1, 2)};
  CHECK_THROWS_AS(lemma_core_check(thin), HypothesisViolation);
}

TEST_CASE("generated instances satisfy the hypotheses and the lemma, checked by brute force") {
  std::size_t checked = 0;
  for (std::size_t d : {2UL, 3UL}) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      std::mt19937_64 rng(split_seed(99, i));
      LemmaInstance in = generate_lemma_instance(rng, d);
      CAPTURE(d);
      CAPTURE(i);
      RatVector vz = in.lattice.basis.apply(in.v);
      CHECK(vz[0] == in.h[0]);
      // P1 has no lattice point in its interior
      auto inner = oracle::brute_points(in.lattice.basis, in.h, Rational(1), 12);
      for (const auto& c : inner) {
        RatVector z = oracle::image(in.lattice.basis, c);
        CHECK(oracle::gauge(z, in.h) == 1);
      }
      LemmaReport r = lemma_core_check(in);
      CHECK(r.pass());
      for (const auto& k : r.multipliers) CHECK(Rational(k) <= in.lambda);
      for (std::size_t j = 0; j < r.constructed.size(); ++j)
        CHECK(oracle::image(in.lattice.basis, r.constructed[j]) == r.constructed_z[j]);

      // independent count of 2 P3
      RatVector h3 = in.h;
      for (std::size_t j = 1; j < d; ++j) h3[j] *= in.lambda;
      auto pts = oracle::brute_points(in.lattice.basis, h3, Rational(2), d == 2 ? 60 : 16);
      CHECK(oracle::rank(pts) >= in.p);
      ++checked;
    }
  }
  CHECK(checked == 80);
}

TEST_CASE("lemma campaigns are deterministic across execution modes") {
  for (std::size_t d : {2UL, 3UL, 4UL}) {
    LemmaCampaign a = run_lemma_campaign(5, d, 60, Execution::serial);
    LemmaCampaign b = run_lemma_campaign(5, d, 60, Execution::parallel);
    CHECK(a.pass());
    CHECK(a.violations == 0);
    CHECK(a.passed == b.passed);
    CHECK(a.rejected == b.rejected);
    CHECK(a.strict == b.strict);
    CHECK(a.passed + a.rejected == 60);
  }
}

TEST_CASE("replay files round trip") {
  std::mt19937_64 rng(3);
  LemmaInstance in = generate_lemma_instance(rng, 3);
  std::stringstream ss;
  write_instance(ss, in);
  LemmaInstance back = read_instance(ss);
  CHECK(back.lattice.basis == in.lattice.basis);
  CHECK(back.h == in.h);
  CHECK(back.lambda == in.lambda);
  CHECK(back.p == in.p);
  CHECK(back.v == in.v);

  std::stringstream bad("minflow-lemma-instance 1\nd 2\nbasis 1 0 0\n");
  CHECK_THROWS_AS(read_instance(bad), std::invalid_argument);
  std::stringstream other("something else\n");
  CHECK_THROWS_AS(read_instance(other), std::invalid_argument);
}

TEST_CASE("corollary campaign") {
  ThetaSpec golden = theta_of({"cf:[1;(1)]"});
  Flow f = make_flow(golden, PathMode::primal, Rational(1, 1000), Rational(100000));
  CorollaryCampaign c = run_corollary(f, Rational(3), Rational(100000), 300, 2, 12);
  CHECK(c.events.size() == 12);
  CHECK(c.out_of_range == 0);
  CHECK(c.pass());

  Flow dual = make_flow(theta_of({"cf:[1;(2)]"}), PathMode::dual, Rational(1, 1000), Rational(200));
  CorollaryCampaign cd = run_corollary(dual, Rational(3, 2), Rational(200), 200, 2, 100);
  CHECK(cd.events.size() >= 3);
  CHECK(cd.pass());
}
