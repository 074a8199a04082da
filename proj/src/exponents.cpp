#include "minflow/exponents.hpp"

#include "minflow/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace minflow {

namespace {

std::string fmt_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Lattice lattice_for(const ThetaSpec& theta, PathMode mode, const Rational& faithfulness) {
  return mode == PathMode::primal ? primal_lattice(theta, faithfulness) : dual_lattice(theta, faithfulness);
}

PathSpec path_for(const ThetaSpec& theta, PathMode mode) {
  return mode == PathMode::primal ? primal_path(theta.m, theta.n) : dual_path(theta.m, theta.n);
}

Rational max_error(const LatticePoint& v) {
  Rational e = 0;
  for (std::size_t j = 1; j < v.z.size(); ++j) e = std::max(e, abs(v.z[j]));
  return e;
}

Box slab_box(std::size_t d, const Rational& t, const Rational& e) {
  Box b;
  b.h.emplace_back(t);
  for (std::size_t j = 1; j < d; ++j) b.h.emplace_back(e);
  return b;
}

std::optional<int> known_dimension(const ThetaSpec& theta) {
  if (auto dim = rational_span_dimension(theta.entries)) return dim;
  // a single irrational entry spans dimension 2 with 1
  if (theta.entries.size() == 1) return theta.entries[0].is_rational() ? 1 : 2;
  return std::nullopt;
}

}  // namespace

double Exponent::value() const {
  if (infinite_) throw std::logic_error("exponent is infinite");
  return value_;
}

std::string Exponent::to_string(int digits) const { return infinite_ ? "inf" : fmt_double(value_, digits); }

bool Exponent::operator<(const Exponent& o) const {
  if (infinite_) return false;
  return o.infinite_ || value_ < o.value_;
}

Rational faithfulness_policy(const Rational& requested, const Rational& u_max, int d) {
  if (requested <= 0) throw std::invalid_argument("faithfulness must be positive");
  if (u_max <= 1) throw std::invalid_argument("u_max must exceed 1");
  Rational cap = pow(u_max, -2L * d) / pow(Integer(10), 30UL);
  return std::min(requested, cap);
}

Flow make_flow(const ThetaSpec& theta, PathMode mode, const Rational& requested, const Rational& u_max) {
  theta.validate();
  Flow f;
  f.theta = theta;
  f.mode = mode;
  f.faithfulness = faithfulness_policy(requested, u_max, theta.dim());
  f.lattice = lattice_for(theta, mode, f.faithfulness);
  f.path = path_for(theta, mode);
  return f;
}

Trace psi_trace(const Lattice& lattice, const PathSpec& path, const TraceConfig& config) {
  if (!(1 < config.u_min) || !(config.u_min < config.u_max))
    throw std::invalid_argument("trace needs 1 < u_min < u_max");
  if (config.p_max < 1 || config.p_max > lattice.dim()) throw std::invalid_argument("p_max must lie in [1, d]");
  if (config.samples < 2) throw std::invalid_argument("trace needs at least two samples");

  std::vector<std::pair<ScaleValue, bool>> points;
  for (const auto& u : geometric_grid(config.u_min, config.u_max, config.samples)) points.emplace_back(u, false);
  if (config.with_events) {
    const std::size_t grid = config.event_grid ? config.event_grid : config.samples;
    try {
      for (auto& e : front_facet_events(lattice, path, config.u_min, config.u_max, grid, config.exec, config.budget))
        points.emplace_back(std::move(e.u), true);
    } catch (const NoFrontFacet&) {
    }
  }
  std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<ScaleValue, bool>> merged;
  for (auto& pt : points) {
    if (!merged.empty() && merged.back().first == pt.first)
      merged.back().second = merged.back().second || pt.second;
    else
      merged.push_back(std::move(pt));
  }

  Trace trace;
  trace.dim = lattice.dim();
  trace.p_max = config.p_max;
  trace.samples.resize(merged.size());
  run_indexed(merged.size(), config.exec, [&](std::size_t i) {
    TraceSample& out = trace.samples[i];
    out.u = merged[i].first;
    out.event = merged[i].second;
    out.s = path.s_at(out.u);
    MinimaResult m = successive_minima(lattice, box_at(path, out.u), config.p_max, config.budget);
    for (std::size_t p = 0; p < config.p_max; ++p) {
      out.psi.push_back(log_quotient(m.lambdas[p], out.u, path.scale));
      out.witnesses.push_back(m.witnesses[p].coords);
    }
    out.lambdas = std::move(m.lambdas);
  });
  return trace;
}

Trace psi_trace(const Lattice& lattice, const PathSpec& path, const Rational& u_min, const Rational& u_max,
                std::size_t samples, std::size_t p_max) {
  TraceConfig c;
  c.u_min = u_min;
  c.u_max = u_max;
  c.samples = samples;
  c.p_max = p_max;
  return psi_trace(lattice, path, c);
}

void write_trace_csv(std::ostream& os, const Trace& trace, bool exact_columns) {
  os << "u,s,p,lambda,psi,event";
  if (exact_columns) os << ",lambda_q,lambda_rho";
  os << '\n';
  for (const auto& smp : trace.samples) {
    const std::string u = smp.u.to_decimal(15);
    const std::string s = fmt_double(smp.s, 15);
    for (std::size_t p = 0; p < smp.lambdas.size(); ++p) {
      os << u << ',' << s << ',' << (p + 1) << ',' << smp.lambdas[p].to_decimal(15) << ','
         << fmt_double(smp.psi[p], 15) << ',' << (smp.event ? 1 : 0);
      if (exact_columns) {
        auto [q, rho] = smp.lambdas[p].with_degree(trace.dim);
        os << ',' << to_string(q) << ',' << to_string(rho);
      }
      os << '\n';
    }
  }
}

std::string trace_csv(const Trace& trace, bool exact_columns) {
  std::ostringstream os;
  write_trace_csv(os, trace, exact_columns);
  return os.str();
}

ExponentEstimates estimate_exponents(const Trace& trace, double tail_fraction) {
  if (trace.samples.empty()) throw std::invalid_argument("empty trace");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw std::invalid_argument("tail fraction must lie in (0, 1]");
  ExponentEstimates est;
  est.p_max = trace.p_max;
  est.tail_fraction = tail_fraction;
  for (const auto& smp : trace.samples) est.s_max = std::max(est.s_max, smp.s);
  est.window_start = tail_fraction * est.s_max;
  est.lower.assign(trace.p_max, std::numeric_limits<double>::infinity());
  est.upper.assign(trace.p_max, -std::numeric_limits<double>::infinity());
  for (const auto& smp : trace.samples) {
    if (smp.s < est.window_start) continue;
    ++est.window_samples;
    for (std::size_t p = 0; p < trace.p_max; ++p) {
      est.lower[p] = std::min(est.lower[p], smp.psi[p]);
      est.upper[p] = std::max(est.upper[p], smp.psi[p]);
    }
    if (smp.event) {
      ++est.window_events;
      est.lower_first_events = std::min(est.lower_first_events.value_or(smp.psi[0]), smp.psi[0]);
    }
  }
  if (est.window_samples == 0) throw std::invalid_argument("tail window holds no sample");
  return est;
}

std::vector<BetaAlpha> beta_alpha_from_psi(const ExponentEstimates& est, int m, int n) {
  const double ratio = static_cast<double>(m + n) / n;
  auto from = [&](double psi) {
    return 1 + psi <= 0 ? Exponent::infinity() : Exponent::finite(ratio / (1 + psi) - 1);
  };
  std::vector<BetaAlpha> out;
  for (std::size_t p = 0; p < est.p_max; ++p) out.push_back(BetaAlpha{from(est.lower[p]), from(est.upper[p])});
  return out;
}

Rational pth_error(const Lattice& primal, std::size_t p, const Rational& t, const EnumerationBudget& budget) {
  const std::size_t d = primal.dim();
  if (d < 2 || p < 1 || p > d) throw std::invalid_argument("pth_error: p must lie in [1, d]");
  if (t < 1) throw std::invalid_argument("pth_error: t must be at least 1");
  const unsigned long n = d - 1;

  // grow the error bound until p independent solutions fit
  Rational e(Integer(1), iroot_floor(floor(t), n) + 1);
  MinimaResult m = successive_minima(primal, slab_box(d, t, e), p, budget);
  while (ScaleValue(Rational(1)) < m.lambdas[p - 1]) {
    e *= 2;
    m = successive_minima(primal, slab_box(d, t, e), p, budget);
  }
  // tighten while the witnesses sit strictly inside
  for (;;) {
    Rational hi = 0;
    for (const auto& w : m.witnesses) hi = std::max(hi, max_error(w));
    if (hi == 0) return 0;
    e = hi;
    m = successive_minima(primal, slab_box(d, t, e), p, budget);
    if (!(m.lambdas[p - 1] < ScaleValue(Rational(1)))) break;
  }

  std::vector<LatticePoint> pts = enumerate_in_box(primal, slab_box(d, t, e), ScaleValue(Rational(1)), budget);
  std::stable_sort(pts.begin(), pts.end(),
                   [](const LatticePoint& a, const LatticePoint& b) { return max_error(a) < max_error(b); });
  SpanTracker span(d);
  for (const auto& v : pts) {
    if (span.add(v.coords) && span.rank() == p) return max_error(v);
  }
  throw std::logic_error("pth_error: enumeration lost the independent solutions");
}

DirectEstimate beta_alpha_direct(const Lattice& primal, std::size_t p, const std::vector<Rational>& t_grid,
                                 double tail_fraction, Execution exec, const EnumerationBudget& budget) {
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i - 1] < t_grid[i])) throw std::invalid_argument("t grid must be increasing");
  if (!(1 < t_grid.front())) throw std::invalid_argument("t grid must start above 1");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw std::invalid_argument("tail fraction must lie in (0, 1]");

  DirectEstimate out;
  out.t = t_grid;
  out.tail_fraction = tail_fraction;
  out.error.resize(t_grid.size());
  run_indexed(t_grid.size(), exec, [&](std::size_t i) { out.error[i] = pth_error(primal, p, t_grid[i], budget); });

  const double log_t_max = ScaleValue(t_grid.back()).log();
  std::optional<Exponent> hi, lo;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const ScaleValue t(t_grid[i]);
    Exponent g = out.error[i] == 0 ? Exponent::infinity()
                                   : Exponent::finite(-log_quotient(ScaleValue(out.error[i]), t));
    out.gamma.push_back(g);
    if (t.log() < tail_fraction * log_t_max) continue;
    if (!hi || *hi < g) hi = g;
    if (!lo || g < *lo) lo = g;
  }
  out.beta = *hi;
  out.alpha = *lo;
  return out;
}

bool BoundsReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundsRow& r) { return r.pass; });
}

BoundsReport check_bounds(const ExponentEstimates& est, int m, int n, double tolerance, PathMode mode) {
  BoundsReport r;
  r.floor = -1;
  r.ceiling = mode == PathMode::primal ? static_cast<double>(m) / n : static_cast<double>(n) / m;
  r.tolerance = tolerance;
  for (std::size_t p = 0; p < est.p_max; ++p) {
    BoundsRow row{p + 1, est.lower[p], est.upper[p], false};
    row.pass = r.floor - tolerance <= row.lower && row.lower <= row.upper + tolerance &&
               row.upper <= r.ceiling + tolerance;
    r.rows.push_back(row);
  }
  return r;
}

std::string to_string(Independence status) {
  switch (status) {
    case Independence::verified: return "verified";
    case Independence::assumed: return "assumed";
    case Independence::failed: return "failed";
  }
  return "?";
}

Independence dimension_status(const ThetaSpec& theta, std::size_t p) {
  if (p <= 1) return Independence::verified;
  auto dim = known_dimension(theta);
  if (!dim) return Independence::assumed;
  return static_cast<std::size_t>(*dim) >= p ? Independence::verified : Independence::failed;
}

Independence independence_status(const ThetaSpec& theta) {
  return dimension_status(theta, static_cast<std::size_t>(theta.n) + 1);
}

bool InequalityReport::dimension_ok() const {
  return std::none_of(rows.begin(), rows.end(),
                      [](const InequalityRow& r) { return r.dimension == Independence::failed; });
}

bool InequalityReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const InequalityRow& r) {
    return r.dimension == Independence::failed || (r.pass_first && r.pass_second);
  });
}

InequalityReport check_main_inequalities(const ExponentEstimates& est, int n, double tolerance,
                                         const std::vector<Independence>& dimension_by_p,
                                         Independence independence) {
  const std::size_t d = static_cast<std::size_t>(n) + 1;
  if (est.p_max < d) throw std::invalid_argument("estimates must cover p = 1..d");
  const double inv_n = 1.0 / n;
  const double lower1 = est.lower[0], upper_d = est.upper[d - 1];
  InequalityReport r;
  r.tolerance = tolerance;
  r.independence = independence;
  for (std::size_t p = 1; p <= d; ++p) {
    const double lo = est.lower[p - 1], hi = est.upper[p - 1];
    InequalityRow row;
    row.p = p;
    row.lhs_first = (1 + lo) * (inv_n - hi);
    row.rhs_first = (1 + lower1) * (inv_n - lo);
    row.lhs_second = (1 + upper_d) * (inv_n - hi);
    row.rhs_second = (1 + hi) * (inv_n - lo);
    row.pass_first = row.lhs_first <= row.rhs_first + tolerance;
    row.pass_second = row.lhs_second <= row.rhs_second + tolerance;
    row.dimension = p - 1 < dimension_by_p.size() ? dimension_by_p[p - 1] : independence;
    r.rows.push_back(row);
  }
  return r;
}

bool TransferenceReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const TransferenceRow& r) { return r.pass; });
}

TransferenceReport check_transference(const ExponentEstimates& primal, const ExponentEstimates& dual, int n,
                                      double tolerance) {
  const std::size_t d = static_cast<std::size_t>(n) + 1;
  if (primal.p_max < d || dual.p_max < d) throw std::invalid_argument("estimates must cover p = 1..d");
  TransferenceReport r;
  r.tolerance = tolerance;
  for (std::size_t p = 1; p <= d; ++p) {
    TransferenceRow row;
    row.p = p;
    row.lower_gap = std::fabs(dual.lower[p - 1] + n * primal.upper[d - p]);
    row.upper_gap = std::fabs(dual.upper[p - 1] + n * primal.lower[d - p]);
    row.pass = row.lower_gap <= tolerance && row.upper_gap <= tolerance;
    r.rows.push_back(row);
  }
  return r;
}

StabilityReport check_stability(const ThetaSpec& theta, PathMode mode, const Rational& faithfulness,
                                const TraceConfig& config) {
  StabilityReport r;
  r.faithfulness = faithfulness;
  r.refined = faithfulness * faithfulness;
  const PathSpec path = path_for(theta, mode);
  Trace a = psi_trace(lattice_for(theta, mode, r.faithfulness), path, config);
  Trace b = psi_trace(lattice_for(theta, mode, r.refined), path, config);
  r.samples = a.samples.size();
  r.witnesses_match = a.samples.size() == b.samples.size();
  for (std::size_t i = 0; r.witnesses_match && i < a.samples.size(); ++i) {
    if (a.samples[i].witnesses != b.samples[i].witnesses || a.samples[i].event != b.samples[i].event) {
      r.witnesses_match = false;
      r.first_mismatch = i;
    }
  }
  r.csv_identical = trace_csv(a) == trace_csv(b);
  return r;
}

}  // namespace minflow
