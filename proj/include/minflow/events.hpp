// Front-facet events of the box flow, the shrinking step that produces them,
// and the companion-scale relations checked at each event.
#pragma once

#include "minflow/execution.hpp"
#include "minflow/lattice.hpp"
#include "minflow/minima.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace minflow {

/// Every lattice point of lambda_1 B has first coordinate 0.
class NoFrontFacet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAnEvent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PathMode { primal, dual };

struct Event {
  ScaleValue u;
  double s = 0;  // reporting only
  ScaleValue lambda1;
  LatticePoint witness;  // |z_1| = lambda1 * h_1
  ScaleValue shrink;     // factor applied to the first half-width (1 if none)
};

/// Contact point obtained by shrinking lambda_1 B along the first axis.
struct FacetContact {
  ScaleValue lambda1;
  ScaleValue shrink;  // largest |v_1| / (lambda_1 h_1) over v in lambda_1 B
  LatticePoint point;
};

/// Works on any box; throws NoFrontFacet when no candidate has v_1 != 0.
FacetContact front_facet_contact(const Lattice& lattice, const Box& box, const EnumerationBudget& budget = {});

/// The event reached from parameter u by shrinking. The path must give every
/// coordinate after the first the same weight.
Event shrink_to_event(const Lattice& lattice, const PathSpec& path, const ScaleValue& u,
                      const EnumerationBudget& budget = {});

/// Events found from a geometric grid of grid_count points in [u_min, u_max].
/// Each event is moved along its witness to the minimum of the witness norm
/// when the witness is still a first minimum there. One event per witness
/// (smallest lambda_1 kept), sorted by u and restricted to the range.
std::vector<Event> front_facet_events(const Lattice& lattice, const PathSpec& path, const Rational& u_min,
                                      const Rational& u_max, std::size_t grid_count,
                                      Execution exec = Execution::parallel, const EnumerationBudget& budget = {});

/// u_1 with u_1^{w_1} = u_0^{w_1} (lambda_1 / lambda_p)^{(d-1)/d}.
ScaleValue companion_scale(const PathSpec& path, const ScaleValue& u0, const ScaleValue& lambda1,
                           const ScaleValue& lambda_p);
ScaleValue companion_scale(const Event& event, const PathSpec& path, std::size_t p, const MinimaResult& at_event);

/// One two-sided inequality low <= value <= high evaluated in floating point.
struct BracketCheck {
  std::string name;
  double low = 0;
  double value = 0;
  double high = 0;
  bool pass = false;
};

struct EventRelationReport {
  std::size_t p = 0;
  ScaleValue u0;
  ScaleValue u1;
  double s0 = 0;
  double s1 = 0;
  bool companion_in_range = true;  // u1 > 1, so the box at u1 exists
  ScaleValue lambda1_u0;
  ScaleValue lambdap_u0;
  ScaleValue lambdap_u1;
  /// ratio[0] compares lambda_p(u1) with lambda_1(u0); ratio[i] for i >= 1
  /// compares lambda_p(u1) with lambda_p(u0), both along coordinate i.
  std::vector<ScaleValue> ratios;
  std::vector<bool> ratio_in_range;
  std::vector<BracketCheck> brackets;
  double s1_from_psi = 0;  // s1 predicted from the psi values at s0

  bool ratios_pass() const;
  bool brackets_pass() const;
  bool pass() const { return companion_in_range && ratios_pass() && brackets_pass(); }
};

EventRelationReport verify_event_relations(const Lattice& lattice, const PathSpec& path, const Event& event,
                                           std::size_t p, PathMode mode, const EnumerationBudget& budget = {});

}  // namespace minflow
