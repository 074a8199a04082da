// psi traces along the flow and the exponent estimates built from them.
#pragma once

#include "minflow/events.hpp"
#include "minflow/execution.hpp"
#include "minflow/lattice.hpp"
#include "minflow/minima.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minflow {

/// A real exponent that may be +infinity.
class Exponent {
 public:
  static Exponent finite(double v) { return Exponent(false, v); }
  static Exponent infinity() { return Exponent(true, 0); }

  bool is_infinite() const { return infinite_; }
  /// Throws std::logic_error when infinite.
  double value() const;
  std::string to_string(int digits = 12) const;

  bool operator<(const Exponent& o) const;
  bool operator==(const Exponent& o) const = default;

 private:
  Exponent(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

/// Lattice and path of one problem, with the theta precision actually used.
struct Flow {
  ThetaSpec theta;
  PathMode mode = PathMode::primal;
  Rational faithfulness;
  Lattice lattice;
  PathSpec path;
};

/// Precision used for a trace up to u_max: min(requested, u_max^(-2d) 10^(-30)).
/// The margin keeps 15-digit output unchanged when the precision is refined.
Rational faithfulness_policy(const Rational& requested, const Rational& u_max, int d);

/// Builds the flow with faithfulness_policy applied.
Flow make_flow(const ThetaSpec& theta, PathMode mode, const Rational& requested, const Rational& u_max);

struct TraceSample {
  ScaleValue u;
  double s = 0;
  std::vector<ScaleValue> lambdas;
  std::vector<double> psi;
  std::vector<IntVector> witnesses;
  bool event = false;
};

struct Trace {
  std::size_t dim = 0;
  std::size_t p_max = 0;
  std::vector<TraceSample> samples;  // sorted by u
};

struct TraceConfig {
  Rational u_min = 2;
  Rational u_max = 100;
  std::size_t samples = 200;
  std::size_t p_max = 2;
  bool with_events = true;
  std::size_t event_grid = 0;  // 0: same as samples
  Execution exec = Execution::parallel;
  EnumerationBudget budget;
};

/// Geometric grid merged with the front-facet events in range.
Trace psi_trace(const Lattice& lattice, const PathSpec& path, const TraceConfig& config);
Trace psi_trace(const Lattice& lattice, const PathSpec& path, const Rational& u_min, const Rational& u_max,
                std::size_t samples, std::size_t p_max);

/// CSV with header u,s,p,lambda,psi,event and optionally lambda_q,lambda_rho
/// (lambda = lambda_q * lambda_rho^(1/d)).
void write_trace_csv(std::ostream& os, const Trace& trace, bool exact_columns = false);
std::string trace_csv(const Trace& trace, bool exact_columns = false);

struct ExponentEstimates {
  std::size_t p_max = 0;
  double tail_fraction = 0;
  double s_max = 0;
  double window_start = 0;
  std::size_t window_samples = 0;
  std::vector<double> lower;  // liminf estimate per p (index p - 1)
  std::vector<double> upper;  // limsup estimate per p
  std::optional<double> lower_first_events;  // psi_1 minimum over event samples in the window
  std::size_t window_events = 0;
};

/// Tail window [tail_fraction * s_max, s_max]; throws if it holds no sample.
ExponentEstimates estimate_exponents(const Trace& trace, double tail_fraction);

struct BetaAlpha {
  Exponent beta = Exponent::finite(0);
  Exponent alpha = Exponent::finite(0);
};

/// From (1 + beta_p)(1 + lower_p) = (1 + alpha_p)(1 + upper_p) = d / n.
std::vector<BetaAlpha> beta_alpha_from_psi(const ExponentEstimates& est, int m, int n);

struct DirectEstimate {
  std::vector<Rational> t;
  std::vector<Rational> error;  // p-th smallest error among independent solutions
  std::vector<Exponent> gamma;  // -ln(error) / ln t
  double tail_fraction = 0;
  Exponent beta = Exponent::finite(0);   // max of gamma over the tail
  Exponent alpha = Exponent::finite(0);  // min of gamma over the tail
};

/// p-th smallest sup-error max_j |theta_j x - y_j| over integer solutions
/// with |x| <= t, taken over independent solutions. theta has n entries (m = 1).
Rational pth_error(const Lattice& primal, std::size_t p, const Rational& t, const EnumerationBudget& budget = {});

DirectEstimate beta_alpha_direct(const Lattice& primal, std::size_t p, const std::vector<Rational>& t_grid,
                                 double tail_fraction = 0.5, Execution exec = Execution::parallel,
                                 const EnumerationBudget& budget = {});

struct BoundsRow {
  std::size_t p = 0;
  double lower = 0;
  double upper = 0;
  bool pass = false;
};

struct BoundsReport {
  double floor = -1;
  double ceiling = 0;
  double tolerance = 0;
  std::vector<BoundsRow> rows;
  bool pass() const;
};

/// floor <= lower_p <= upper_p <= ceiling within tolerance; the ceiling is
/// m/n for the primal flow and n/m for the dual one.
BoundsReport check_bounds(const ExponentEstimates& est, int m, int n, double tolerance,
                          PathMode mode = PathMode::primal);

enum class Independence { verified, assumed, failed };
std::string to_string(Independence status);

/// Whether dim_Q span(1, theta_1, ..., theta_n) >= p is known to hold.
Independence dimension_status(const ThetaSpec& theta, std::size_t p);
/// Whether 1, theta_1, ..., theta_n are linearly independent over Q.
Independence independence_status(const ThetaSpec& theta);

struct InequalityRow {
  std::size_t p = 0;
  double lhs_first = 0, rhs_first = 0;
  double lhs_second = 0, rhs_second = 0;
  bool pass_first = false, pass_second = false;
  Independence dimension = Independence::assumed;
};

struct InequalityReport {
  double tolerance = 0;
  Independence independence = Independence::assumed;
  std::vector<InequalityRow> rows;
  bool dimension_ok() const;
  bool pass() const;
};

/// Both main inequalities for every p in [1, d]; estimates must cover p = d.
InequalityReport check_main_inequalities(const ExponentEstimates& est, int n, double tolerance,
                                         const std::vector<Independence>& dimension_by_p = {},
                                         Independence independence = Independence::assumed);

struct TransferenceRow {
  std::size_t p = 0;
  double lower_gap = 0;  // |lower_p(dual) + n upper_{d+1-p}(primal)|
  double upper_gap = 0;  // |upper_p(dual) + n lower_{d+1-p}(primal)|
  bool pass = false;
};

struct TransferenceReport {
  double tolerance = 0;
  std::vector<TransferenceRow> rows;
  bool pass() const;
};

TransferenceReport check_transference(const ExponentEstimates& primal, const ExponentEstimates& dual, int n,
                                      double tolerance);

struct StabilityReport {
  Rational faithfulness;
  Rational refined;
  std::size_t samples = 0;
  bool witnesses_match = false;
  bool csv_identical = false;
  std::optional<std::size_t> first_mismatch;
  bool pass() const { return witnesses_match && csv_identical; }
};

/// Re-runs the trace with the squared precision and compares.
StabilityReport check_stability(const ThetaSpec& theta, PathMode mode, const Rational& faithfulness,
                                const TraceConfig& config);

}  // namespace minflow
