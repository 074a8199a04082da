#include "minflow/minima.hpp"

#include "minflow/reduction.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

namespace minflow {

namespace {

struct Candidate {
  ScaleValue norm;
  IntVector key;  // sign-normalized coordinates
};

bool better(const Candidate& a, const Candidate& b) {
  auto c = a.norm <=> b.norm;
  if (c != 0) return c < 0;
  return coords_less(a.key, b.key);
}

/// Gauge evaluation with the reciprocal half-widths computed once.
class Gauge {
 public:
  explicit Gauge(const Box& box) {
    inv_h_.reserve(box.dim());
    for (const auto& h : box.h) inv_h_.push_back(h.inverse());
  }

  /// Empty for the zero vector.
  std::optional<ScaleValue> operator()(const RatVector& z) const {
    std::optional<ScaleValue> best;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z[i] == 0) continue;
      ScaleValue v = inv_h_[i].scaled(abs(z[i]));
      if (!best || *best < v) best = std::move(v);
    }
    return best;
  }

 private:
  std::vector<ScaleValue> inv_h_;
};

void check_box(const Lattice& lattice, const Box& box) {
  if (lattice.dim() < 1 || box.dim() != lattice.dim())
    throw std::invalid_argument("box and lattice dimensions differ");
}

// Shared machinery of the generic engine: reduced basis in box-scaled
// coordinates, exact Gram-Schmidt data and a depth-first traversal.
class Enumerator {
 public:
  Enumerator(const Lattice& lattice, const Box& box, const EnumerationBudget& budget)
      : lattice_(lattice), box_(box), gauge_(box), budget_(budget), d_(lattice.dim()) {
    for (const auto& h : box.h) {
      hbar_.push_back(h.upper_bound());
      hhat_.push_back(pow2(floor_log2(h.lower_bound())));
    }
  }

  /// Loads the basis given by integer coordinate columns; the first r
  /// columns span the sublattice to avoid.
  void load(const std::vector<IntVector>& columns, std::size_t r) {
    r_ = r;
    basis_ = BasisColumns{};
    for (const auto& c : columns) {
      RatVector actual = lattice_.basis.apply(c);
      RatVector scaled(d_);
      for (std::size_t i = 0; i < d_; ++i) scaled[i] = actual[i] / hhat_[i];
      basis_.scaled.push_back(std::move(scaled));
      basis_.actual.push_back(std::move(actual));
      basis_.coords.push_back(c);
    }
    lll_reduce(basis_, r_);
    gs_ = gram_schmidt(basis_.scaled);
    x_.assign(d_, Integer(0));
    acc_.assign(d_ + 1, RatVector(d_, Rational(0)));
    acc_coords_.assign(d_ + 1, IntVector(d_, Integer(0)));
  }

  /// Smallest point (by norm, then key) outside the sublattice span.
  Candidate minimum_outside_span() {
    collect_ = false;
    std::optional<Candidate> start;
    for (std::size_t j = r_; j < d_; ++j) {
      Candidate c{*gauge_(basis_.actual[j]), sign_normalized(basis_.coords[j])};
      if (!start || better(c, *start)) start = std::move(c);
    }
    best_ = std::move(*start);
    set_radius(best_.norm);
    traverse();
    return best_;
  }

  std::vector<LatticePoint> points_within(const ScaleValue& scale) {
    collect_ = true;
    found_.clear();
    bounds_.clear();
    for (const auto& h : box_.h) bounds_.push_back(scale * h);
    set_radius(scale);
    traverse();
    return std::move(found_);
  }

 private:
  void set_radius(const ScaleValue& s) {
    sbar_ = s.upper_bound();
    radius2_ = 0;
    for (std::size_t i = 0; i < d_; ++i) {
      Rational w = sbar_ * hbar_[i] / hhat_[i];
      radius2_ += w * w;
    }
  }

  void tick() {
    if (++nodes_ > budget_.max_nodes)
      throw BudgetExceeded("enumeration budget of " + std::to_string(budget_.max_nodes) + " nodes exceeded");
  }

  void traverse() {
    if (d_ == 1) {
      line(true);
      return;
    }
    level(d_ - 1, Rational(0), true);
  }

  void place(std::size_t k, const Integer& xk) {
    x_[k] = xk;
    const RatVector& prev = acc_[k + 1];
    const IntVector& prevc = acc_coords_[k + 1];
    for (std::size_t i = 0; i < d_; ++i) {
      acc_[k][i] = prev[i];
      if (xk != 0 && basis_.actual[k][i] != 0) acc_[k][i] += Rational(xk) * basis_.actual[k][i];
      acc_coords_[k][i] = prevc[i] + xk * basis_.coords[k][i];
    }
  }

  void level(std::size_t k, const Rational& partial, bool zero_above) {
    Rational center = 0;
    for (std::size_t j = k + 1; j < d_; ++j)
      if (x_[j] != 0) center -= Rational(x_[j]) * gs_.mu[j][k];
    const bool complement = k >= r_;
    const bool nonnegative = complement && zero_above;

    auto visit = [&](const Integer& xk) {
      Rational diff = Rational(xk) - center;
      Rational next = partial + diff * diff * gs_.norm2[k];
      if (next > radius2_) return false;
      tick();
      place(k, xk);
      bool zero = zero_above && xk == 0;
      // the complement part must not vanish
      if (!(complement && k == r_ && zero)) {
        if (k == 1)
          line(zero);
        else
          level(k - 1, next, zero);
      }
      return true;
    };

    Integer start = round_nearest(center);
    Integer up = start;
    if (nonnegative && up < 0) up = 0;
    for (Integer xk = up; visit(xk); ++xk) {
    }
    for (Integer xk = start - 1; !(nonnegative && xk < 0) && visit(xk); --xk) {
    }
  }

  // Integer range of t such that acc_[1] + t b_0 may lie in the box scaled by sbar_.
  bool line_range(Integer& lo, Integer& hi) const {
    const RatVector& a = acc_[1];
    const RatVector& b = basis_.actual[0];
    std::optional<Rational> tlo, thi;
    for (std::size_t i = 0; i < d_; ++i) {
      Rational w = sbar_ * hbar_[i];
      if (b[i] == 0) {
        if (abs(a[i]) > w) return false;
        continue;
      }
      Rational t1 = (-w - a[i]) / b[i], t2 = (w - a[i]) / b[i];
      if (t1 > t2) std::swap(t1, t2);
      if (!tlo || t1 > *tlo) tlo = t1;
      if (!thi || t2 < *thi) thi = t2;
    }
    lo = ceil(*tlo);
    hi = floor(*thi);
    return lo <= hi;
  }

  RatVector point_on_line(const Integer& t) const {
    RatVector z = acc_[1];
    if (t != 0)
      for (std::size_t i = 0; i < d_; ++i) z[i] += Rational(t) * basis_.actual[0][i];
    return z;
  }

  IntVector coords_on_line(const Integer& t) const {
    IntVector c = acc_coords_[1];
    for (std::size_t i = 0; i < d_; ++i) c[i] += t * basis_.coords[0][i];
    return c;
  }

  ScaleValue line_norm(const Integer& t) {
    tick();
    return *gauge_(point_on_line(t));
  }

  void line(bool zero_above) {
    if (d_ == 1) {
      acc_[1].assign(d_, Rational(0));
      acc_coords_[1].assign(d_, Integer(0));
    }
    Integer lo, hi;
    if (!line_range(lo, hi)) return;
    const bool through_origin = zero_above && r_ == 0;
    if (collect_) {
      if (through_origin && lo < 1) lo = 1;
      for (Integer t = lo; t <= hi; ++t) {
        tick();
        RatVector z = point_on_line(t);
        if (inside(z)) found_.push_back(LatticePoint{sign_normalized(coords_on_line(t)), {}});
      }
      return;
    }
    if (through_origin) {
      if (lo <= 1 && 1 <= hi) offer(line_norm(1), coords_on_line(1));
      return;
    }

    // the gauge is convex along the line: ternary search on integers
    Integer L = lo, H = hi;
    while (H - L > 2) {
      Integer third = (H - L) / 3;
      Integer m1 = L + third, m2 = H - third;
      auto c = line_norm(m1) <=> line_norm(m2);
      if (c < 0)
        H = m2 - 1;
      else if (c > 0)
        L = m1 + 1;
      else {
        L = m1;
        H = m2;
      }
    }
    Integer tmin = L;
    ScaleValue fmin = line_norm(L);
    for (Integer t = L + 1; t <= H; ++t) {
      ScaleValue f = line_norm(t);
      if (f < fmin) {
        fmin = f;
        tmin = t;
      }
    }
    if (best_.norm < fmin) return;

    // extent of the plateau of minimizers
    Integer ta = tmin, tb = tmin;
    if (tmin > lo && line_norm(tmin - 1) == fmin) {
      Integer a = lo, b = tmin - 1;  // smallest t in [a, b] with f(t) == fmin
      while (a < b) {
        Integer mid = a + (b - a) / 2;
        if (line_norm(mid) == fmin)
          b = mid;
        else
          a = mid + 1;
      }
      ta = a;
    }
    if (tmin < hi && line_norm(tmin + 1) == fmin) {
      Integer a = tmin + 1, b = hi;  // largest t in [a, b] with f(t) == fmin
      while (a < b) {
        Integer mid = a + (b - a + 1) / 2;
        if (line_norm(mid) == fmin)
          a = mid;
        else
          b = mid - 1;
      }
      tb = a;
    }

    std::vector<Integer> ts{ta, tb};
    if (ta < tb) {
      const IntVector& alpha = acc_coords_[1];
      const IntVector& gamma = basis_.coords[0];
      std::size_t j = 0;
      while (j < d_ && gamma[j] == 0) ++j;
      if (j < d_) {
        Rational t0 = Rational(-alpha[j]) / Rational(gamma[j]);
        for (Integer t : {floor(t0), ceil(t0)}) ts.push_back(std::clamp(t, ta, tb));
      }
    }
    std::optional<IntVector> key;
    for (const auto& t : ts) {
      IntVector k = sign_normalized(coords_on_line(t));
      if (!key || coords_less(k, *key)) key = std::move(k);
    }
    offer(fmin, std::move(*key));
  }

  void offer(ScaleValue norm, IntVector coords) {
    Candidate c{std::move(norm), sign_normalized(std::move(coords))};
    if (!better(c, best_)) return;
    bool shrink = c.norm < best_.norm;
    best_ = std::move(c);
    if (shrink) set_radius(best_.norm);
  }

  bool inside(const RatVector& z) const {
    bool nonzero = false;
    for (std::size_t i = 0; i < d_; ++i) {
      if (z[i] == 0) continue;
      nonzero = true;
      if (bounds_[i] < ScaleValue(abs(z[i]))) return false;
    }
    return nonzero;
  }

  const Lattice& lattice_;
  const Box& box_;
  Gauge gauge_;
  EnumerationBudget budget_;
  std::size_t d_;
  std::size_t nodes_ = 0;

  RatVector hbar_;
  RatVector hhat_;
  BasisColumns basis_;
  GramSchmidt gs_;
  std::size_t r_ = 0;

  Rational sbar_;
  Rational radius2_;
  IntVector x_;
  std::vector<RatVector> acc_;        // acc_[k] = sum_{j >= k} x_j b_j
  std::vector<IntVector> acc_coords_;

  bool collect_ = false;
  Candidate best_{ScaleValue(), {}};
  std::vector<ScaleValue> bounds_;
  std::vector<LatticePoint> found_;
};

std::vector<IntVector> identity_columns(std::size_t d) {
  std::vector<IntVector> cols(d, IntVector(d, Integer(0)));
  for (std::size_t i = 0; i < d; ++i) cols[i][i] = 1;
  return cols;
}

}  // namespace

IntVector sign_normalized(IntVector coords) {
  for (const auto& c : coords) {
    if (c == 0) continue;
    if (c < 0)
      for (auto& x : coords) x = -x;
    break;
  }
  return coords;
}

bool coords_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

LatticePoint make_point(const Lattice& lattice, IntVector coords) {
  if (coords.size() != lattice.dim()) throw std::invalid_argument("coordinate vector has wrong dimension");
  RatVector z = lattice.basis.apply(coords);
  return LatticePoint{std::move(coords), std::move(z)};
}

ScaleValue box_norm(const LatticePoint& point, const Box& box) {
  if (point.z.size() != box.dim()) throw std::invalid_argument("point and box dimensions differ");
  auto n = Gauge(box)(point.z);
  if (!n) throw std::invalid_argument("box_norm of the zero point");
  return *n;
}

std::vector<LatticePoint> enumerate_in_box(const Lattice& lattice, const Box& box, const ScaleValue& scale,
                                           const EnumerationBudget& budget) {
  check_box(lattice, box);
  Enumerator e(lattice, box, budget);
  e.load(identity_columns(lattice.dim()), 0);
  std::vector<LatticePoint> points = e.points_within(scale);
  for (auto& p : points) p = make_point(lattice, std::move(p.coords));
  std::sort(points.begin(), points.end(),
            [](const LatticePoint& a, const LatticePoint& b) { return coords_less(a.coords, b.coords); });
  return points;
}

MinimaResult successive_minima(const Lattice& lattice, const Box& box, std::size_t p,
                               const EnumerationBudget& budget) {
  check_box(lattice, box);
  const std::size_t d = lattice.dim();
  if (p < 1 || p > d) throw std::invalid_argument("successive_minima: p must lie in [1, d]");
  Enumerator e(lattice, box, budget);
  MinimaResult out;
  std::vector<IntVector> found;
  for (std::size_t k = 0; k < p; ++k) {
    e.load(k == 0 ? identity_columns(d) : saturation_completion(found, d), k);
    Candidate c = e.minimum_outside_span();
    found.push_back(c.key);
    out.lambdas.push_back(c.norm);
    out.witnesses.push_back(make_point(lattice, std::move(c.key)));
  }
  return out;
}

MinimaResult scan_minima(const RatVector& theta, const Box& box, std::size_t p, const EnumerationBudget& budget) {
  const std::size_t n = theta.size();
  const std::size_t d = n + 1;
  if (box.dim() != d) throw std::invalid_argument("scan_minima: box must have dimension n + 1");
  if (p < 1 || p > d) throw std::invalid_argument("scan_minima: p must lie in [1, d]");
  Gauge gauge(box);
  std::size_t nodes = 0;

  for (Rational scale = 1;; scale *= 2) {
    std::vector<Candidate> cands;
    ScaleValue cap(scale);
    RatVector width(d);
    for (std::size_t i = 0; i < d; ++i) width[i] = scale * box.h[i].upper_bound();
    const Integer xmax = floor(width[0]);

    for (Integer x = 0; x <= xmax; ++x) {
      IntVector lo(n), hi(n);
      bool empty = false;
      for (std::size_t j = 0; j < n; ++j) {
        Rational c = theta[j] * Rational(x);
        lo[j] = ceil(c - width[j + 1]);
        hi[j] = floor(c + width[j + 1]);
        if (lo[j] > hi[j]) empty = true;
      }
      if (empty) continue;
      IntVector y = lo;
      for (;;) {
        if (++nodes > budget.max_nodes) throw BudgetExceeded("scan budget exceeded");
        IntVector coords(d);
        coords[0] = x;
        for (std::size_t j = 0; j < n; ++j) coords[j + 1] = y[j];
        IntVector key = sign_normalized(coords);
        if (key == coords) {  // one representative per +- pair; skips zero too
          bool zero = std::all_of(coords.begin(), coords.end(), [](const Integer& v) { return v == 0; });
          if (!zero) {
            RatVector z(d);
            z[0] = Rational(x);
            for (std::size_t j = 0; j < n; ++j) z[j + 1] = Rational(y[j]) - theta[j] * Rational(x);
            ScaleValue norm = *gauge(z);
            if (!(cap < norm)) cands.push_back(Candidate{std::move(norm), std::move(key)});
          }
        }
        std::size_t j = 0;
        while (j < n && y[j] == hi[j]) {
          y[j] = lo[j];
          ++j;
        }
        if (j == n) break;
        ++y[j];
      }
    }

    std::sort(cands.begin(), cands.end(), better);
    SpanTracker span(d);
    MinimaResult out;
    for (auto& c : cands) {
      if (!span.add(c.key)) continue;
      out.lambdas.push_back(c.norm);
      LatticePoint pt;
      pt.z = RatVector(d);
      pt.z[0] = Rational(c.key[0]);
      for (std::size_t j = 0; j < n; ++j) pt.z[j + 1] = Rational(c.key[j + 1]) - theta[j] * Rational(c.key[0]);
      pt.coords = std::move(c.key);
      out.witnesses.push_back(std::move(pt));
      if (out.count() == p) return out;
    }
  }
}

}  // namespace minflow
