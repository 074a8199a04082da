#include "minflow/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace minflow {

namespace {

const ScaleValue kOne(Rational(1));
const ScaleValue kTwo(Rational(2));

void check_flow_path(const PathSpec& path) {
  if (path.dim() < 2) throw std::invalid_argument("path needs at least two coordinates");
  for (std::size_t i = 2; i < path.dim(); ++i)
    if (path.weights[i] != path.weights[1])
      throw std::invalid_argument("shrinking needs equal weights on all coordinates after the first");
  if (path.weights[0] == path.weights[1]) throw std::invalid_argument("path does not move the first coordinate");
}

FacetContact contact_at(const Lattice& lattice, const Box& box, const ScaleValue& lambda1,
                        const EnumerationBudget& budget) {
  std::optional<std::size_t> best;
  std::vector<LatticePoint> pts = enumerate_in_box(lattice, box, lambda1, budget);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].z[0] == 0) continue;
    if (!best || abs(pts[*best].z[0]) < abs(pts[i].z[0])) best = i;
  }
  if (!best) throw NoFrontFacet("no lattice point of lambda_1 B leaves the hyperplane z_1 = 0");
  ScaleValue shrink = ScaleValue(abs(pts[*best].z[0])) / (lambda1 * box.h[0]);
  return FacetContact{lambda1, shrink, std::move(pts[*best])};
}

bool touches_front(const LatticePoint& v, const ScaleValue& lambda1, const Box& box) {
  return v.z[0] != 0 && ScaleValue(abs(v.z[0])) == lambda1 * box.h[0];
}

bool in_unit_interval_doubled(const ScaleValue& r) { return !(r < kOne) && !(kTwo < r); }

// Moves an event along its witness v to the minimum of the norm of v along the
// path, where |v_1| / h_1 = max_{i >= 2} |v_i| / h_i. Kept only if v is still a
// first minimum there.
Event settle(const Lattice& lattice, const PathSpec& path, Event e, const EnumerationBudget& budget) {
  Rational rest = 0;
  for (std::size_t i = 1; i < e.witness.z.size(); ++i) rest = std::max(rest, abs(e.witness.z[i]));
  if (rest == 0) return e;
  const long gap = path.weights[0] - path.weights[1];
  ScaleValue u = ScaleValue(abs(e.witness.z[0]) / rest).pow(gap > 0 ? 1 : -1, static_cast<unsigned long>(std::labs(gap)));
  if (!(kOne < u) || u == e.u) return e;
  Box box = box_at(path, u);
  ScaleValue norm = box_norm(e.witness, box);
  if (!(successive_minima(lattice, box, 1, budget).lambdas[0] == norm)) return e;
  e.u = std::move(u);
  e.s = path.s_at(e.u);
  e.lambda1 = std::move(norm);
  return e;
}

BracketCheck bracket(std::string name, double low, double value, double high) {
  const double tol = 1e-9 * (1.0 + std::fabs(low) + std::fabs(high));
  return BracketCheck{std::move(name), low, value, high, low - tol <= value && value <= high + tol};
}

}  // namespace

FacetContact front_facet_contact(const Lattice& lattice, const Box& box, const EnumerationBudget& budget) {
  MinimaResult m = successive_minima(lattice, box, 1, budget);
  return contact_at(lattice, box, m.lambdas[0], budget);
}

Event shrink_to_event(const Lattice& lattice, const PathSpec& path, const ScaleValue& u,
                      const EnumerationBudget& budget) {
  check_flow_path(path);
  Box box = box_at(path, u);
  MinimaResult m = successive_minima(lattice, box, 1, budget);
  const ScaleValue& lambda1 = m.lambdas[0];
  if (touches_front(m.witnesses[0], lambda1, box))
    return Event{u, path.s_at(u), lambda1, std::move(m.witnesses[0]), kOne};

  FacetContact c = contact_at(lattice, box, lambda1, budget);
  const long w1 = path.weights[0], w2 = path.weights[1];
  const long gap = w1 - w2;
  ScaleValue factor = c.shrink.pow(gap > 0 ? 1 : -1, static_cast<unsigned long>(std::labs(gap)));
  ScaleValue u_event = u * factor;
  // lambda' h_i(u') = lambda h_i(u) for i >= 2
  ScaleValue lambda_event = lambda1 * (u / u_event).pow(w2);

  Box shrunk = box_at(path, u_event);
  if (!(box_norm(c.point, shrunk) == lambda_event) || !touches_front(c.point, lambda_event, shrunk))
    throw std::logic_error("shrinking did not place the contact point on the front facet");
  MinimaResult check = successive_minima(lattice, shrunk, 1, budget);
  if (!(check.lambdas[0] == lambda_event))
    throw std::logic_error("first minimum after shrinking differs from the predicted value");
  return Event{u_event, path.s_at(u_event), lambda_event, std::move(c.point), c.shrink};
}

std::vector<Event> front_facet_events(const Lattice& lattice, const PathSpec& path, const Rational& u_min,
                                      const Rational& u_max, std::size_t grid_count, Execution exec,
                                      const EnumerationBudget& budget) {
  if (!(1 < u_min) || !(u_min < u_max)) throw std::invalid_argument("event scan needs 1 < u_min < u_max");
  check_flow_path(path);
  const std::vector<Rational> grid = geometric_grid(u_min, u_max, grid_count);
  std::vector<std::optional<Event>> found(grid.size());
  std::vector<char> failed(grid.size(), 0);
  run_indexed(grid.size(), exec, [&](std::size_t i) {
    try {
      found[i] = settle(lattice, path, shrink_to_event(lattice, path, ScaleValue(grid[i]), budget), budget);
    } catch (const NoFrontFacet&) {
      failed[i] = 1;
    }
  });
  if (std::all_of(failed.begin(), failed.end(), [](char f) { return f != 0; }))
    throw NoFrontFacet("no grid point reaches a front-facet event");

  const ScaleValue lo(u_min), hi(u_max);
  std::vector<Event> events;
  for (auto& e : found) {
    if (!e || e->u < lo || hi < e->u) continue;
    events.push_back(std::move(*e));
  }
  // one event per witness: the smallest first minimum, then the smallest u
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.witness.coords != b.witness.coords) return coords_less(a.witness.coords, b.witness.coords);
    if (!(a.lambda1 == b.lambda1)) return a.lambda1 < b.lambda1;
    return a.u < b.u;
  });
  events.erase(std::unique(events.begin(), events.end(),
                           [](const Event& a, const Event& b) { return a.witness.coords == b.witness.coords; }),
               events.end());
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.u < b.u; });
  return events;
}

ScaleValue companion_scale(const PathSpec& path, const ScaleValue& u0, const ScaleValue& lambda1,
                           const ScaleValue& lambda_p) {
  const long d = static_cast<long>(path.dim());
  const long n = d - 1;
  const long w1 = path.weights.at(0);
  if (w1 == 0) throw std::invalid_argument("companion scale needs a nonzero first weight");
  // exponent n / (d w1)
  long num = n, den = d * std::labs(w1);
  const long g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (w1 < 0) num = -num;
  return u0 * (lambda1 / lambda_p).pow(num, static_cast<unsigned long>(den));
}

ScaleValue companion_scale(const Event& event, const PathSpec& path, std::size_t p, const MinimaResult& at_event) {
  if (p < 1 || p > at_event.count()) throw std::invalid_argument("companion_scale: minima do not reach p");
  return companion_scale(path, event.u, at_event.lambdas[0], at_event.lambdas[p - 1]);
}

bool EventRelationReport::ratios_pass() const {
  return !ratio_in_range.empty() && std::all_of(ratio_in_range.begin(), ratio_in_range.end(), [](bool b) { return b; });
}

bool EventRelationReport::brackets_pass() const {
  return std::all_of(brackets.begin(), brackets.end(), [](const BracketCheck& b) { return b.pass; });
}

EventRelationReport verify_event_relations(const Lattice& lattice, const PathSpec& path, const Event& event,
                                           std::size_t p, PathMode mode, const EnumerationBudget& budget) {
  check_flow_path(path);
  const std::size_t d = path.dim();
  if (p < 1 || p > d) throw std::invalid_argument("verify_event_relations: p must lie in [1, d]");

  EventRelationReport r;
  r.p = p;
  r.u0 = event.u;
  Box box0 = box_at(path, event.u);
  MinimaResult m0 = successive_minima(lattice, box0, p, budget);
  if (!(m0.lambdas[0] == event.lambda1) || !(box_norm(event.witness, box0) == event.lambda1) ||
      !touches_front(event.witness, event.lambda1, box0))
    throw NotAnEvent("witness is not a first-minimum point on the front facet");

  r.lambda1_u0 = m0.lambdas[0];
  r.lambdap_u0 = m0.lambdas[p - 1];
  r.u1 = companion_scale(path, event.u, r.lambda1_u0, r.lambdap_u0);
  r.s0 = path.s_at(r.u0);
  if (!(kOne < r.u1)) {
    r.companion_in_range = false;
    return r;
  }
  r.s1 = path.s_at(r.u1);
  Box box1 = box_at(path, r.u1);
  MinimaResult m1 = successive_minima(lattice, box1, p, budget);
  r.lambdap_u1 = m1.lambdas[p - 1];

  for (std::size_t i = 0; i < d; ++i) {
    const long w = path.weights[i];
    const ScaleValue& base = (i == 0) ? r.lambda1_u0 : r.lambdap_u0;
    ScaleValue ratio = (r.u1.pow(w) * r.lambdap_u1) / (r.u0.pow(w) * base);
    r.ratio_in_range.push_back(in_unit_interval_doubled(ratio));
    r.ratios.push_back(std::move(ratio));
  }

  const double ln2 = std::log(2.0);
  const double n = static_cast<double>(d - 1);
  const double psi1_s0 = log_quotient(r.lambda1_u0, r.u0, path.scale);
  const double psip_s0 = log_quotient(r.lambdap_u0, r.u0, path.scale);
  const double psip_s1 = log_quotient(r.lambdap_u1, r.u1, path.scale);
  const double s0 = r.s0, s1 = r.s1;
  if (mode == PathMode::primal) {
    const double a0 = s0 * (1 + psi1_s0), a1 = s1 * (1 + psip_s1);
    r.brackets.push_back(bracket("first-coordinate growth", a0, a1, a0 + ln2));
    const double b0 = s0 * (1 / n - psip_s0), b1 = s1 * (1 / n - psip_s1);
    r.brackets.push_back(bracket("trailing-coordinate decay", b0 - ln2, b1, b0));
    r.s1_from_psi = s0 * (1 + (n / static_cast<double>(d)) * (psi1_s0 - psip_s0));
  } else {
    const double a0 = s0 * (n - psi1_s0), a1 = s1 * (n - psip_s1);
    r.brackets.push_back(bracket("first-coordinate decay", a0 - ln2, a1, a0));
    const double b0 = s0 * (1 + psip_s0), b1 = s1 * (1 + psip_s1);
    r.brackets.push_back(bracket("trailing-coordinate growth", b0, b1, b0 + ln2));
    r.s1_from_psi = s0 * (1 + (psip_s0 - psi1_s0) / static_cast<double>(d));
  }
  r.brackets.push_back(bracket("companion parameter", r.s1_from_psi, s1, r.s1_from_psi));
  return r;
}

}  // namespace minflow
