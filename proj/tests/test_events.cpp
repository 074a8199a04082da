#include "minflow/events.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace minflow;

namespace {

Box rational_box(const RatVector& h) {
  Box b;
  for (const auto& x : h) b.h.emplace_back(x);
  return b;
}

ThetaSpec theta_of(std::vector<std::string> texts) {
  ThetaSpec t;
  t.m = 1;
  t.n = static_cast<int>(texts.size());
  for (const auto& s : texts) t.entries.push_back(parse_real_spec(s));
  return t;
}

std::set<Integer> fibonacci_upto(const Integer& bound) {
  std::set<Integer> out;
  Integer a = 1, b = 2;
  while (a <= bound) {
    out.insert(a);
    Integer c = a + b;
    a = b;
    b = c;
  }
  return out;
}

}  // namespace

TEST_CASE("shrinking on small lattices") {
  Lattice z2 = primal_lattice(1, 1, {Rational(0)});
  Event e = shrink_to_event(z2, primal_path(1, 1), ScaleValue(Rational(3)));
  CHECK(e.u == ScaleValue(Rational(3)));
  CHECK(e.shrink == ScaleValue(Rational(1)));
  CHECK(e.witness.coords == IntVector{1, 0});
  CHECK(e.lambda1 == ScaleValue(Rational(1, 3)));

  Lattice third = primal_lattice(1, 1, {Rational(1, 3)});
  Event t = shrink_to_event(third, primal_path(1, 1), ScaleValue(Rational(3)));
  CHECK(t.u == ScaleValue(Rational(3)));
  CHECK(t.lambda1 == ScaleValue(Rational(1)));
  CHECK(t.witness.z == RatVector{3, 0});

  Lattice id;
  id.basis = Matrix::identity(2);
  CHECK_THROWS_AS(front_facet_contact(id, rational_box({Rational(1, 2), 2})), NoFrontFacet);
}

TEST_CASE("shrinking produces an irrational event parameter") {
  Lattice golden = primal_lattice(theta_of({"cf:[1;(1)]"}), Rational(1, Integer("1000000000000")));
  PathSpec path = primal_path(1, 1);
  ScaleValue u(Rational(7));
  Event e = shrink_to_event(golden, path, u);
  CHECK_FALSE(u < e.u);
  CHECK_FALSE(ScaleValue(Rational(1)) < e.shrink);
  Box box = box_at(path, e.u);
  CHECK(ScaleValue(abs(e.witness.z[0])) == e.lambda1 * box.h[0]);
  // shrinking never increases the first minimum
  MinimaResult before = successive_minima(golden, box_at(path, u), 1);
  CHECK_FALSE(before.lambdas[0] < e.lambda1);
  // independent check of lambda_1 at the event
  auto brute = oracle::brute_minima(golden.basis, box, 1, 30);
  CHECK(brute.lambdas[0] == e.lambda1);
}

TEST_CASE("golden ratio events sit at Fibonacci denominators") {
  Lattice golden = primal_lattice(theta_of({"cf:[1;(1)]"}), Rational(1, Integer("1000000000000000000000")));
  std::vector<Event> ev = front_facet_events(golden, primal_path(1, 1), Rational(2), Rational(200), 400);
  REQUIRE(ev.size() >= 6);
  auto fib = fibonacci_upto(Integer(100000));
  std::vector<Integer> firsts;
  for (const auto& e : ev) {
    Integer q = abs(e.witness.z[0]).get_num();
    CHECK(fib.count(q) == 1);
    firsts.push_back(q);
  }
  // consecutive Fibonacci numbers, no gaps
  for (std::size_t i = 1; i < firsts.size(); ++i) CHECK(firsts[i] > firsts[i - 1]);
  for (std::size_t i = 2; i < firsts.size(); ++i) CHECK(firsts[i] == firsts[i - 1] + firsts[i - 2]);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1].u < ev[i].u);
}

TEST_CASE("trivial lattice: every grid point is an event with the first basis vector") {
  Lattice zero = primal_lattice(1, 2, {Rational(0), Rational(0)});
  PathSpec path = primal_path(1, 2);
  for (Rational u : {Rational(3, 2), Rational(5), Rational(41, 3)}) {
    Event e = shrink_to_event(zero, path, ScaleValue(u));
    CHECK(e.u == ScaleValue(u));
    CHECK(e.witness.coords == IntVector{1, 0, 0});
  }
  std::vector<Event> ev = front_facet_events(zero, path, Rational(2), Rational(50), 20);
  REQUIRE(ev.size() == 1);  // one witness, smallest lambda_1 kept
  CHECK(ev[0].u == ScaleValue(Rational(50)));
}

TEST_CASE("rational theta freezes at the exact solution") {
  Lattice l = primal_lattice(1, 1, {Rational(22, 7)});
  std::vector<Event> ev = front_facet_events(l, primal_path(1, 1), Rational(20), Rational(5000), 60);
  REQUIRE_FALSE(ev.empty());
  CHECK(ev.back().witness.z == RatVector{7, 0});
}

TEST_CASE("serial and parallel scans agree") {
  Lattice l = primal_lattice(theta_of({"cf:[1;(2)]"}), Rational(1, Integer("1000000000000000000000")));
  auto a = front_facet_events(l, primal_path(1, 1), Rational(2), Rational(500), 80, Execution::serial);
  auto b = front_facet_events(l, primal_path(1, 1), Rational(2), Rational(500), 80, Execution::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].witness.coords == b[i].witness.coords);
  }
}

TEST_CASE("companion scale") {
  PathSpec p2 = primal_path(1, 1);
  ScaleValue u0(Rational(3));
  CHECK(companion_scale(p2, u0, ScaleValue(Rational(5)), ScaleValue(Rational(5))) == u0);
  // (1/4)^(1/2) = 1/2
  ScaleValue u1 = companion_scale(p2, u0, ScaleValue(Rational(1)), ScaleValue(Rational(4)));
  CHECK(u1 == ScaleValue(Rational(3, 2)));
  CHECK(u1.is_rational());

  PathSpec p3 = primal_path(1, 2);
  ScaleValue v1 = companion_scale(p3, ScaleValue(Rational(2)), ScaleValue(Rational(1)), ScaleValue(Rational(2)));
  CHECK(v1 == ScaleValue(Rational(2), Rational(1, 2), 3));
  // cube both sides of u1^2 = 4 (1/2)^(2/3)
  CHECK(v1.pow(6) == ScaleValue(Rational(64 * 1, 4)));

  // monotone: a larger lambda_p / lambda_1 gives a smaller u1
  ScaleValue a = companion_scale(p3, ScaleValue(Rational(9)), ScaleValue(Rational(1)), ScaleValue(Rational(3)));
  ScaleValue b = companion_scale(p3, ScaleValue(Rational(9)), ScaleValue(Rational(1)), ScaleValue(Rational(5)));
  CHECK(b < a);

  // dual path moves the other way
  ScaleValue c = companion_scale(dual_path(1, 1), u0, ScaleValue(Rational(1)), ScaleValue(Rational(4)));
  CHECK(c == ScaleValue(Rational(6)));
}

TEST_CASE("event relations: identity instance") {
  Lattice zero = primal_lattice(1, 1, {Rational(0)});
  PathSpec path = primal_path(1, 1);
  Event e = shrink_to_event(zero, path, ScaleValue(Rational(5)));
  EventRelationReport r = verify_event_relations(zero, path, e, 1, PathMode::primal);
  CHECK(r.u1 == r.u0);
  CHECK(r.pass());
  for (const auto& x : r.ratios) CHECK(x == ScaleValue(Rational(1)));

  Event fake = e;
  fake.witness = make_point(zero, {0, 1});
  CHECK_THROWS_AS(verify_event_relations(zero, path, fake, 2, PathMode::primal), NotAnEvent);
}

TEST_CASE("event relations hold for golden ratio and the dual of sqrt 2") {
  Lattice golden = primal_lattice(theta_of({"cf:[1;(1)]"}), Rational(1, Integer("1000000000000000000000000")));
  PathSpec path = primal_path(1, 1);
  auto ev = front_facet_events(golden, path, Rational(3), Rational(100000), 300);
  REQUIRE(ev.size() >= 20);
  for (std::size_t i = 0; i < 20; ++i) {
    EventRelationReport r = verify_event_relations(golden, path, ev[i], 2, PathMode::primal);
    CAPTURE(i);
    REQUIRE(r.companion_in_range);
    CHECK(r.ratios_pass());
    CHECK(r.brackets_pass());
    // independent minima at the companion scale; smaller points would have
    // |x| <= lambda_p u1 and |y| <= 2|x| + 1
    if (i < 8) {
      long bound = 2 * floor(r.lambdap_u1.upper_bound() * r.u1.upper_bound()).get_si() + 3;
      auto brute = oracle::brute_minima(golden.basis, box_at(path, r.u1), 2, bound);
      CHECK(brute.lambdas[1] == r.lambdap_u1);
    }
  }

  ThetaSpec root2 = theta_of({"cf:[1;(2)]"});
  Lattice dual = dual_lattice(root2, Rational(1, Integer("1000000000000000000000000")));
  PathSpec dpath = dual_path(1, 1);
  auto dev = front_facet_events(dual, dpath, Rational(3, 2), Rational(100), 200);
  REQUIRE(dev.size() >= 3);
  for (const auto& e : dev) {
    EventRelationReport r = verify_event_relations(dual, dpath, e, 2, PathMode::dual);
    CHECK(r.companion_in_range);
    CHECK(r.pass());
  }
}
