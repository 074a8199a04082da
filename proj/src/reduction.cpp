#include "minflow/reduction.hpp"

#include <stdexcept>
#include <utility>

namespace minflow {

namespace {

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

Rational mu_of(const RatVector& v, const GramSchmidt& gs, std::size_t j) { return dot(v, gs.star[j]) / gs.norm2[j]; }

}  // namespace

void BasisColumns::swap_columns(std::size_t i, std::size_t j) {
  std::swap(scaled[i], scaled[j]);
  std::swap(actual[i], actual[j]);
  std::swap(coords[i], coords[j]);
}

void BasisColumns::subtract(std::size_t target, std::size_t source, const Integer& factor) {
  Rational f(factor);
  for (std::size_t i = 0; i < scaled[target].size(); ++i) {
    scaled[target][i] -= f * scaled[source][i];
    actual[target][i] -= f * actual[source][i];
  }
  for (std::size_t i = 0; i < coords[target].size(); ++i) coords[target][i] -= factor * coords[source][i];
}

GramSchmidt gram_schmidt(const std::vector<RatVector>& columns) {
  const std::size_t k = columns.size();
  GramSchmidt gs;
  gs.star.resize(k);
  gs.norm2.resize(k);
  gs.mu.assign(k, RatVector());
  for (std::size_t j = 0; j < k; ++j) {
    gs.star[j] = columns[j];
    gs.mu[j].assign(j, Rational(0));
    for (std::size_t l = 0; l < j; ++l) {
      gs.mu[j][l] = mu_of(columns[j], gs, l);
      if (gs.mu[j][l] == 0) continue;
      for (std::size_t i = 0; i < gs.star[j].size(); ++i) gs.star[j][i] -= gs.mu[j][l] * gs.star[l][i];
    }
    gs.norm2[j] = dot(gs.star[j], gs.star[j]);
    if (gs.norm2[j] == 0) throw std::domain_error("linearly dependent basis columns");
  }
  return gs;
}

void lll_reduce(BasisColumns& basis, std::size_t barrier, const Rational& delta) {
  const std::size_t d = basis.size();
  if (d < 2) return;
  GramSchmidt gs = gram_schmidt(basis.scaled);
  std::size_t k = 1;
  while (k < d) {
    for (std::size_t j = k; j-- > 0;) {
      Integer q = round_nearest(mu_of(basis.scaled[k], gs, j));
      if (q != 0) basis.subtract(k, j, q);
    }
    // b*_k is unchanged by size reduction; refresh mu row k
    for (std::size_t l = 0; l < k; ++l) gs.mu[k][l] = mu_of(basis.scaled[k], gs, l);
    if (k == barrier) {
      ++k;
      continue;
    }
    const Rational& m = gs.mu[k][k - 1];
    if (gs.norm2[k] < (delta - m * m) * gs.norm2[k - 1]) {
      basis.swap_columns(k - 1, k);
      gs = gram_schmidt(basis.scaled);
      k = (k > 1) ? k - 1 : 1;
    } else {
      ++k;
    }
  }
}

std::vector<IntVector> saturation_completion(const std::vector<IntVector>& generators, std::size_t d) {
  const std::size_t r = generators.size();
  // rows of M are indexed by coordinate, columns by generator
  std::vector<IntVector> M(d, IntVector(r));
  for (std::size_t j = 0; j < r; ++j) {
    if (generators[j].size() != d) throw std::invalid_argument("generator dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) M[i][j] = generators[j][i];
  }
  std::vector<IntVector> P(d, IntVector(d, Integer(0)));
  for (std::size_t i = 0; i < d; ++i) P[i][i] = 1;

  auto combine = [&](std::vector<IntVector>& rows, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
    // row_a <- s row_a + t row_b ; row_b <- u row_a + v row_b
    for (std::size_t c = 0; c < rows[a].size(); ++c) {
      Integer ra = rows[a][c], rb = rows[b][c];
      rows[a][c] = s * ra + t * rb;
      rows[b][c] = u * ra + v * rb;
    }
  };

  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = j + 1; i < d; ++i) {
      if (M[i][j] == 0) continue;
      Integer x = M[j][j], y = M[i][j], g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      Integer u = -y / g, v = x / g;
      combine(M, j, i, s, t, u, v);
      combine(P, j, i, s, t, u, v);
    }
    if (M[j][j] == 0) throw std::invalid_argument("saturation: generators are linearly dependent");
  }

  // U = P^{-1}, exact via rational elimination (P is unimodular)
  std::vector<RatVector> a(d, RatVector(2 * d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < d; ++c) a[i][c] = Rational(P[i][c]);
    a[i][d + i] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    Rational p = a[col][col];
    for (auto& x : a[col]) x /= p;
    for (std::size_t rr = 0; rr < d; ++rr) {
      if (rr == col || a[rr][col] == 0) continue;
      Rational f = a[rr][col];
      for (std::size_t c = 0; c < 2 * d; ++c) a[rr][c] -= f * a[col][c];
    }
  }
  std::vector<IntVector> columns(d, IntVector(d));
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t i = 0; i < d; ++i) {
      const Rational& x = a[i][d + c];
      if (x.get_den() != 1) throw std::logic_error("saturation: inverse is not integral");
      columns[c][i] = x.get_num();
    }
  return columns;
}

RatVector SpanTracker::reduced(const IntVector& v) const {
  if (v.size() != dim_) throw std::invalid_argument("SpanTracker: dimension mismatch");
  RatVector r;
  r.reserve(dim_);
  for (const auto& x : v) r.emplace_back(x);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    Rational f = r[pivots_[k]];
    if (f == 0) continue;
    for (std::size_t c = 0; c < dim_; ++c)
      if (rows_[k][c] != 0) r[c] -= f * rows_[k][c];
  }
  return r;
}

bool SpanTracker::independent(const IntVector& v) const {
  for (const auto& x : reduced(v))
    if (x != 0) return true;
  return false;
}

bool SpanTracker::add(const IntVector& v) {
  RatVector r = reduced(v);
  std::size_t piv = 0;
  while (piv < dim_ && r[piv] == 0) ++piv;
  if (piv == dim_) return false;
  Rational lead = r[piv];
  for (auto& x : r) x /= lead;
  // keep earlier rows reduced at the new pivot
  for (auto& row : rows_) {
    Rational f = row[piv];
    if (f == 0) continue;
    for (std::size_t c = 0; c < dim_; ++c) row[c] -= f * r[c];
  }
  rows_.push_back(std::move(r));
  pivots_.push_back(piv);
  return true;
}

std::size_t integer_rank(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) return 0;
  std::vector<RatVector> rows;
  for (const auto& v : vectors) {
    RatVector r;
    for (const auto& x : v) r.emplace_back(x);
    rows.push_back(std::move(r));
  }
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace minflow
