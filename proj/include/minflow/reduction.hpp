// Exact LLL reduction and saturated sublattice bases.
#pragma once

#include "minflow/rational.hpp"

#include <vector>

namespace minflow {

/// Lattice basis carried in three synchronized column views: the vectors
/// used for reduction decisions (`scaled`), the actual lattice vectors, and
/// their integer coordinates in the lattice's defining basis.
struct BasisColumns {
  std::vector<RatVector> scaled;
  std::vector<RatVector> actual;
  std::vector<IntVector> coords;

  std::size_t size() const { return scaled.size(); }
  void swap_columns(std::size_t i, std::size_t j);
  /// column[target] -= factor * column[source]
  void subtract(std::size_t target, std::size_t source, const Integer& factor);
};

struct GramSchmidt {
  std::vector<RatVector> star;      // b*_j
  RatVector norm2;                  // |b*_j|^2
  std::vector<RatVector> mu;        // mu[j][l] for l < j
};

GramSchmidt gram_schmidt(const std::vector<RatVector>& columns);

/// LLL with parameter delta on `scaled`, never swapping across `barrier`
/// (columns [0, barrier) keep spanning the same sublattice).
void lll_reduce(BasisColumns& basis, std::size_t barrier = 0, const Rational& delta = Rational(99, 100));

/// Integer unimodular d x d matrix (as columns) whose first r columns span
/// Z^d intersected with the rational span of the r independent `generators`.
std::vector<IntVector> saturation_completion(const std::vector<IntVector>& generators, std::size_t d);

/// Incremental rank test over Q: add() keeps a vector only if it is
/// independent of the ones kept so far.
class SpanTracker {
 public:
  explicit SpanTracker(std::size_t dim) : dim_(dim) {}
  bool independent(const IntVector& v) const;
  bool add(const IntVector& v);
  std::size_t rank() const { return rows_.size(); }

 private:
  RatVector reduced(const IntVector& v) const;

  std::size_t dim_;
  std::vector<RatVector> rows_;       // echelon rows, pivot entry 1
  std::vector<std::size_t> pivots_;
};

/// Rank over Q of integer vectors.
std::size_t integer_rank(const std::vector<IntVector>& vectors);

}  // namespace minflow
