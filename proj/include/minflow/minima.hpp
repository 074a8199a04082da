// Successive minima of boxes with respect to lattices, computed exactly.
//
// Two routes are provided:
//  * successive_minima: generic engine. The basis is LLL-reduced in
//    box-scaled coordinates, then each minimum is found by a shrinking-radius
//    search over the cosets of the saturated span of the previous witnesses.
//    The innermost basis direction is handled in closed form along lines, so
//    the cost does not grow with the spread between minima.
//  * scan_minima: reference route for the primal lattices of m = 1 problems
//    (points (x, y - theta x)). Scans x over a range, picks the y's near
//    theta x, and doubles the scale until rank p is reached.
//
// Both select witnesses greedily in the order (norm, sign-normalized integer
// coordinates lexicographically), so their results must coincide exactly.
#pragma once

#include "minflow/lattice.hpp"
#include "minflow/scale_value.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace minflow {

struct LatticePoint {
  IntVector coords;  // coefficients in the lattice's defining basis
  RatVector z;       // basis * coords
};

LatticePoint make_point(const Lattice& lattice, IntVector coords);

/// Gauge of the box: max_i |z_i| / h_i. Throws std::invalid_argument for 0.
ScaleValue box_norm(const LatticePoint& point, const Box& box);

struct MinimaResult {
  std::vector<ScaleValue> lambdas;
  std::vector<LatticePoint> witnesses;

  std::size_t count() const { return lambdas.size(); }
};

struct EnumerationBudget {
  std::size_t max_nodes = 20'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every nonzero lattice point with |z_i| <= scale * h_i, one per +- pair,
/// sign-normalized and sorted by coordinates.
std::vector<LatticePoint> enumerate_in_box(const Lattice& lattice, const Box& box, const ScaleValue& scale,
                                           const EnumerationBudget& budget = {});

/// Exact lambda_1..lambda_p with witnesses; 1 <= p <= d.
MinimaResult successive_minima(const Lattice& lattice, const Box& box, std::size_t p,
                               const EnumerationBudget& budget = {});

/// Reference route for primal m = 1 lattices given by their Theta entries
/// (n rationals). Coordinates are (x, y_1, ..., y_n).
MinimaResult scan_minima(const RatVector& theta, const Box& box, std::size_t p,
                         const EnumerationBudget& budget = {});

/// Flip the sign so the first nonzero entry is positive.
IntVector sign_normalized(IntVector coords);
/// Strict order used for tie-breaking among equal norms.
bool coords_less(const IntVector& a, const IntVector& b);

}  // namespace minflow
