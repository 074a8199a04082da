#include "minflow/cli.hpp"

#include "minflow/events.hpp"
#include "minflow/exponents.hpp"
#include "minflow/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace minflow::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(const ScaleValue& v) { return v.to_decimal(12); }

// Same rendering as the trace CSV.
std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

fs::path output_path(const std::string& given) {
  fs::path p(given);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("MINFLOW_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

fs::path default_replay_dir() {
  if (const char* dir = std::getenv("MINFLOW_OUT_DIR"); dir && *dir) return fs::path(dir) / "replays";
  return fs::path("replays");
}

// Options shared by every leaf command.
struct Common {
  std::string config;
  bool serial = false;
  std::size_t max_nodes = EnumerationBudget{}.max_nodes;

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
  EnumerationBudget budget() const { return EnumerationBudget{max_nodes}; }

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value file; command-line flags take precedence");
    app->add_flag("--serial", serial, "Run the serial reference instead of the OpenMP kernels");
    app->add_option("--budget", max_nodes, "Enumeration node budget per minima computation");
  }
};

struct Problem {
  std::vector<std::string> theta;
  int m = 1;
  int n = 0;
  std::string mode = "primal";
  std::string faithfulness = "1e-30";

  void attach(CLI::App* app, bool with_mode = true) {
    app->add_option("--theta", theta, "Entries of Theta, row-major (rat:p/q, cf:[a0;...(period)], liouville:b)");
    app->add_option("-m,--m", m, "Columns of Theta");
    app->add_option("-n,--n", n, "Rows of Theta (default: entries / m)");
    if (with_mode)
      app->add_option("--mode", mode, "Flow: primal or dual")->check(CLI::IsMember({"primal", "dual"}));
    app->add_option("--faithfulness", faithfulness, "Requested precision of the rational stand-ins for Theta");
  }

  PathMode path_mode() const { return mode == "dual" ? PathMode::dual : PathMode::primal; }

  ThetaSpec resolve(std::ostream& err) const {
    if (theta.empty()) throw UsageError("--theta is required");
    if (m < 1) throw UsageError("--m must be positive");
    ThetaSpec spec;
    spec.m = m;
    spec.n = n > 0 ? n : static_cast<int>(theta.size()) / m;
    if (spec.n < 1 || theta.size() != static_cast<std::size_t>(spec.m * spec.n))
      throw UsageError("expected m * n = " + std::to_string(spec.m * std::max(spec.n, 1)) + " theta entries, got " +
                       std::to_string(theta.size()));
    for (const auto& text : theta) {
      RealSpec e = parse_real_spec(text);
      if (const auto* r = std::get_if<RationalValue>(&e.variant()); r && r->from_literal)
        err << "warning: theta entry '" << text << "' is a bare decimal, taken as the rational " << to_string(r->value)
            << "; its exponents are those of a rational number\n";
      spec.entries.push_back(std::move(e));
    }
    spec.validate();
    return spec;
  }

  Rational requested() const {
    Rational f = parse_rational(faithfulness);
    if (f <= 0) throw UsageError("--faithfulness must be positive");
    return f;
  }
};

void require_single_column(const ThetaSpec& theta, const std::string& what) {
  if (theta.m != 1) throw UsageError(what + " requires m = 1");
}

PathSpec path_for(const ThetaSpec& theta, PathMode mode) {
  return mode == PathMode::primal ? primal_path(theta.m, theta.n) : dual_path(theta.m, theta.n);
}

struct Range {
  std::string u_min = "2";
  std::string u_max;
  double s_max = 0;
  std::size_t samples = 200;
  double default_s_max = 0;

  void attach(CLI::App* app, const std::string& samples_flag = "--samples") {
    app->add_option("--u-min", u_min, "First parameter u (> 1)");
    app->add_option("--u-max", u_max, "Last parameter u");
    app->add_option("--s-max", s_max, "Last parameter in the s scale (alternative to --u-max)");
    app->add_option(samples_flag, samples, "Geometric grid size");
  }

  std::pair<Rational, Rational> resolve(const PathSpec& path, double s_scale = 1) const {
    Rational lo = parse_rational(u_min);
    Rational hi;
    if (!u_max.empty()) {
      hi = parse_rational(u_max);
    } else {
      double s = s_max > 0 ? s_max : default_s_max;
      if (!(s > 0)) throw UsageError("--u-max or --s-max is required");
      hi = path.u_for_s(s * s_scale);
    }
    if (!(lo > 1)) throw UsageError("--u-min must exceed 1");
    if (!(lo < hi)) throw UsageError("empty u range");
    if (samples < 2) throw UsageError("--samples must be at least 2");
    return {lo, hi};
  }
};

std::size_t resolve_p(std::size_t p, const ThetaSpec& theta) {
  const auto d = static_cast<std::size_t>(theta.dim());
  if (p == 0) return d;
  if (p > d) throw UsageError("--p must lie in [1, " + std::to_string(d) + "]");
  return p;
}

void check_tolerance(double tol) {
  if (!(tol > 0)) throw UsageError("--tolerance must be positive");
}

void check_tail(double tail) {
  if (!(tail > 0 && tail < 1)) throw UsageError("--tail must lie in (0, 1)");
}

struct Io {
  std::ostream& out;
  std::ostream& err;
};

// Writes to --out when given, else to the standard stream.
template <class Fn>
void emit(const std::string& out_path, std::ostream& fallback, std::ostream& err, Fn&& write) {
  if (out_path.empty()) {
    write(fallback);
    return;
  }
  fs::path p = output_path(out_path);
  std::ofstream file(p, std::ios::binary);
  if (!file) throw UsageError("cannot open " + p.string());
  write(file);
  err << "wrote " << p.string() << "\n";
}

Trace run_trace(const Flow& flow, const Rational& lo, const Rational& hi, std::size_t samples, std::size_t p,
                const Common& common) {
  TraceConfig cfg;
  cfg.u_min = lo;
  cfg.u_max = hi;
  cfg.samples = samples;
  cfg.p_max = p;
  cfg.with_events = flow.theta.m == 1;
  cfg.exec = common.exec();
  cfg.budget = common.budget();
  return psi_trace(flow.lattice, flow.path, cfg);
}

void print_window(std::ostream& os, const ExponentEstimates& est) {
  os << "window s in [" << num(est.window_start) << ", " << num(est.s_max) << "], " << est.window_samples
     << " samples, " << est.window_events << " events\n";
}

// ---------------------------------------------------------------- trace

struct TraceCommand {
  Common common;
  Problem problem;
  Range range;
  std::size_t p = 0;
  bool no_events = false;
  std::size_t event_grid = 0;
  bool exact = false;
  std::string out;

  void attach(CLI::App* app) {
    common.attach(app);
    problem.attach(app);
    range.attach(app);
    app->add_option("--p", p, "Largest minimum index (default d)");
    app->add_flag("--no-events", no_events, "Do not merge front-facet events into the grid");
    app->add_option("--event-grid", event_grid, "Grid used for event detection (default --samples)");
    app->add_flag("--exact", exact, "Add exact lambda columns");
    app->add_option("--out", out, "CSV file (default stdout)");
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    PathMode mode = problem.path_mode();
    auto [lo, hi] = range.resolve(path_for(theta, mode));
    Flow flow = make_flow(theta, mode, problem.requested(), hi);
    TraceConfig cfg;
    cfg.u_min = lo;
    cfg.u_max = hi;
    cfg.samples = range.samples;
    cfg.p_max = resolve_p(p, theta);
    cfg.with_events = !no_events && theta.m == 1;
    if (!no_events && theta.m != 1) io.err << "note: events are only detected for m = 1\n";
    cfg.event_grid = event_grid;
    cfg.exec = common.exec();
    cfg.budget = common.budget();
    Trace trace = psi_trace(flow.lattice, flow.path, cfg);
    emit(out, io.out, io.err, [&](std::ostream& os) { write_trace_csv(os, trace, exact); });
    return ok;
  }
};

// ---------------------------------------------------------------- events

struct EventsCommand {
  Common common;
  Problem problem;
  Range range;
  std::size_t grid = 400;
  bool exact = false;
  std::string out;

  void attach(CLI::App* app) {
    common.attach(app);
    problem.attach(app);
    range.attach(app);
    app->add_option("--grid", grid, "Grid used for event detection");
    app->add_flag("--exact", exact, "Add exact u and lambda_1 columns");
    app->add_option("--out", out, "CSV file (default stdout)");
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    require_single_column(theta, "events");
    PathMode mode = problem.path_mode();
    auto [lo, hi] = range.resolve(path_for(theta, mode));
    Flow flow = make_flow(theta, mode, problem.requested(), hi);
    auto events = front_facet_events(flow.lattice, flow.path, lo, hi, grid, common.exec(), common.budget());
    emit(out, io.out, io.err, [&](std::ostream& os) {
      os << "u,s,lambda1,shrink,witness";
      if (exact) os << ",u_exact,lambda1_exact";
      os << "\n";
      for (const auto& e : events) {
        std::string w;
        for (const auto& c : e.witness.coords) w += (w.empty() ? "" : " ") + c.get_str();
        os << e.u.to_decimal(15) << "," << csv_num(e.s) << "," << e.lambda1.to_decimal(15) << ","
           << e.shrink.to_decimal(15) << "," << w;
        if (exact) os << "," << e.u.to_exact_string() << "," << e.lambda1.to_exact_string();
        os << "\n";
      }
    });
    return ok;
  }
};

// ---------------------------------------------------------------- exponents

struct ExponentsCommand {
  Common common;
  Problem problem;
  Range range;
  std::size_t p = 0;
  double tail = 0.5;
  bool direct = false;
  std::string t_max = "1000000";
  std::size_t t_samples = 40;

  void attach(CLI::App* app) {
    range.samples = 400;
    range.default_s_max = 25;
    common.attach(app);
    problem.attach(app);
    range.attach(app);
    app->add_option("--p", p, "Largest index (default d)");
    app->add_option("--tail", tail, "Window [tail * s_max, s_max] used for the estimates");
    app->add_flag("--direct", direct, "Also estimate beta_p and alpha_p from the approximation problem directly");
    app->add_option("--t-max", t_max, "Largest height for the direct estimator");
    app->add_option("--t-samples", t_samples, "Heights sampled by the direct estimator");
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    check_tail(tail);
    PathMode mode = problem.path_mode();
    auto [lo, hi] = range.resolve(path_for(theta, mode));
    Flow flow = make_flow(theta, mode, problem.requested(), hi);
    std::size_t pmax = resolve_p(p, theta);
    Trace trace = run_trace(flow, lo, hi, range.samples, pmax, common);
    ExponentEstimates est = estimate_exponents(trace, tail);

    auto& os = io.out;
    os << "flow " << problem.mode << ", m = " << theta.m << ", n = " << theta.n << ", faithfulness "
       << num(flow.faithfulness.get_d()) << "\n";
    print_window(os, est);
    const bool derived = mode == PathMode::primal;
    std::vector<BetaAlpha> ba;
    if (derived) ba = beta_alpha_from_psi(est, theta.m, theta.n);
    os << "p  psi_lower  psi_upper" << (derived ? "  beta  alpha" : "") << "\n";
    for (std::size_t i = 0; i < pmax; ++i) {
      os << i + 1 << "  " << num(est.lower[i]) << "  " << num(est.upper[i]);
      if (derived) os << "  " << ba[i].beta.to_string(12) << "  " << ba[i].alpha.to_string(12);
      os << "\n";
    }
    if (est.lower_first_events) os << "psi_1 minimum over events: " << num(*est.lower_first_events) << "\n";

    if (direct) {
      require_single_column(theta, "--direct");
      Rational top = parse_rational(t_max);
      if (!(top > 2) || t_samples < 2) throw UsageError("--t-max must exceed 2 and --t-samples be at least 2");
      Flow primal = make_flow(theta, PathMode::primal, problem.requested(), top);
      auto grid = geometric_grid(Rational(2), top, t_samples);
      os << "direct estimates, t in [2, " << num(top.get_d()) << "], tail " << num(tail) << "\n";
      os << "p  beta  alpha\n";
      for (std::size_t q = 1; q <= pmax && q <= static_cast<std::size_t>(theta.n); ++q) {
        DirectEstimate de = beta_alpha_direct(primal.lattice, q, grid, tail, common.exec(), common.budget());
        os << q << "  " << de.beta.to_string(12) << "  " << de.alpha.to_string(12) << "\n";
      }
    }
    return ok;
  }
};

// ---------------------------------------------------------------- verify lemma

struct LemmaCommand {
  Common common;
  std::size_t trials = 1000;
  std::size_t dim = 3;
  std::uint64_t seed = 7;
  std::string replay_dir;
  bool no_confirm = false;
  std::string replay;

  void attach(CLI::App* app) {
    common.attach(app);
    app->add_option("--trials", trials, "Random instances");
    app->add_option("--dim", dim, "Dimension d (2 to 6)");
    app->add_option("--seed", seed, "Campaign seed");
    app->add_option("--replay-dir", replay_dir, "Where failing instances are written");
    app->add_flag("--no-confirm", no_confirm, "Skip the enumeration cross-check of 2 P3");
    app->add_option("--replay", replay, "Re-check a single instance file instead of running a campaign");
  }

  int run_replay(Io io) {
    std::ifstream in(replay);
    if (!in) throw UsageError("cannot open " + replay);
    LemmaInstance inst = read_instance(in);
    LemmaReport r = lemma_core_check(inst, !no_confirm, common.budget());
    io.out << "instance d = " << inst.lattice.dim() << ", p = " << inst.p << ", lambda = " << to_string(inst.lambda)
           << "\n";
    for (std::size_t i = 0; i < r.constructed.size(); ++i) {
      io.out << "k = " << r.multipliers[i].get_str() << ", v' =";
      for (const auto& c : r.constructed[i]) io.out << " " << c.get_str();
      io.out << "\n";
    }
    io.out << (r.pass() ? "pass" : "FAIL") << (r.strict ? " (strict)" : "") << "\n";
    if (!r.pass()) {
      if (!r.multipliers_bounded) io.err << "failed: lemma-multiplier-bound\n";
      if (!r.first_coordinate_reduced) io.err << "failed: lemma-first-coordinate\n";
      if (!r.inside_double_p3) io.err << "failed: lemma-containment\n";
      if (!r.independent) io.err << "failed: lemma-independence\n";
      if (!r.enumeration_confirms) io.err << "failed: lemma-enumeration\n";
      return check_failed;
    }
    return ok;
  }

  int run(Io io) {
    if (!replay.empty()) return run_replay(io);
    if (dim < 2 || dim > 6) throw UsageError("--dim must lie in [2, 6]");
    if (trials == 0) throw UsageError("--trials must be positive");
    fs::path dir = replay_dir.empty() ? default_replay_dir() : output_path(replay_dir);
    LemmaCampaign c = run_lemma_campaign(seed, dim, trials, common.exec(), dir, !no_confirm, common.budget());
    io.out << "lemma d = " << dim << ", seed " << seed << ": " << c.passed << "/" << c.trials << " pass";
    if (c.rejected) io.out << ", " << c.rejected << " rejected by the hypotheses";
    io.out << ", " << c.strict << " strict\n";
    if (!c.pass()) {
      for (std::size_t i = 0; i < c.failing_trials.size(); ++i) {
        io.err << "failed: lemma-construction, trial " << c.failing_trials[i];
        if (i < c.replay_files.size()) io.err << ", replay " << c.replay_files[i].string();
        io.err << "\n";
      }
      return check_failed;
    }
    return ok;
  }
};

// ---------------------------------------------------------------- verify corollary

struct CorollaryCommand {
  Common common;
  Problem problem;
  Range range;
  std::string u_max_default = "1000000";
  std::size_t p = 2;
  std::size_t max_events = 30;
  std::size_t min_events = 1;
  bool verbose = false;

  void attach(CLI::App* app) {
    range.u_min = "3";
    range.samples = 1000;
    common.attach(app);
    problem.attach(app);
    range.attach(app, "--grid");
    app->add_option("--p", p, "Index of the companion minimum");
    app->add_option("--events", max_events, "Check at most this many events");
    app->add_option("--min-events", min_events, "Fail when fewer events are found");
    app->add_flag("--verbose", verbose, "One line per event");
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    require_single_column(theta, "verify corollary");
    PathMode mode = problem.path_mode();
    Range r = range;
    if (r.u_max.empty() && r.s_max <= 0) r.u_max = u_max_default;
    auto [lo, hi] = r.resolve(path_for(theta, mode));
    std::size_t pp = resolve_p(p, theta);
    if (pp < 2) throw UsageError("--p must be at least 2");
    Flow flow = make_flow(theta, mode, problem.requested(), hi);
    CorollaryCampaign c = run_corollary(flow, lo, hi, r.samples, pp, max_events, common.exec(), common.budget());

    if (verbose) {
      io.out << "event  u0  u1  lambda1(u0)  lambda_p(u1)  ratios\n";
      for (std::size_t i = 0; i < c.reports.size(); ++i) {
        const auto& rep = c.reports[i];
        io.out << i << "  " << num(rep.u0) << "  " << (rep.companion_in_range ? num(rep.u1) : "-") << "  "
               << num(rep.lambda1_u0) << "  " << num(rep.lambdap_u1);
        for (const auto& q : rep.ratios) io.out << "  " << num(q);
        io.out << "\n";
      }
    }
    std::size_t checked = c.reports.size() - c.out_of_range;
    io.out << "corollary p = " << pp << ": " << c.events.size() << " events, " << checked - c.ratio_failures << "/"
           << checked << " with all ratios in [1, 2], " << checked - c.bracket_failures << "/" << checked
           << " within the brackets";
    if (c.out_of_range) io.out << ", " << c.out_of_range << " with companion u <= 1 skipped";
    io.out << "\n";

    bool failed = false;
    for (std::size_t i = 0; i < c.reports.size(); ++i) {
      const auto& rep = c.reports[i];
      if (!rep.companion_in_range) continue;
      for (std::size_t j = 0; j < rep.ratio_in_range.size(); ++j) {
        if (rep.ratio_in_range[j]) continue;
        io.err << "failed: corollary-ratio-" << (j == 0 ? "first" : "coordinate-" + std::to_string(j + 1))
               << ", event " << i << " at u = " << num(rep.u0) << ", ratio " << num(rep.ratios[j]) << "\n";
        failed = true;
      }
      for (const auto& b : rep.brackets) {
        if (b.pass) continue;
        io.err << "failed: corollary-bracket (" << b.name << "), event " << i << ": " << num(b.low)
               << " <= " << num(b.value) << " <= " << num(b.high) << "\n";
        failed = true;
      }
    }
    if (c.events.size() < min_events) {
      io.err << "failed: corollary-event-count, " << c.events.size() << " < " << min_events << "\n";
      failed = true;
    }
    return failed ? check_failed : ok;
  }
};

// ---------------------------------------------------------------- exponent checks

struct EstimateOptions {
  Range range;
  double tail = 0.5;
  double tolerance = 0;

  explicit EstimateOptions(double default_tolerance) : tolerance(default_tolerance) {
    range.samples = 400;
    range.default_s_max = 25;
  }

  void attach(CLI::App* app) {
    range.attach(app);
    app->add_option("--tail", tail, "Window [tail * s_max, s_max] used for the estimates");
    app->add_option("--tolerance", tolerance, "Allowed slack");
  }

  ExponentEstimates estimate(const ThetaSpec& theta, PathMode mode, const Rational& requested, const Common& common,
                             double s_scale = 1) const {
    auto [lo, hi] = range.resolve(path_for(theta, mode), s_scale);
    Flow flow = make_flow(theta, mode, requested, hi);
    Trace trace = run_trace(flow, lo, hi, range.samples, static_cast<std::size_t>(theta.dim()), common);
    return estimate_exponents(trace, tail);
  }
};

struct TheoremCommand {
  Common common;
  Problem problem;
  EstimateOptions est_opts{0.05};

  void attach(CLI::App* app) {
    common.attach(app);
    problem.attach(app, false);
    est_opts.attach(app);
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    require_single_column(theta, "verify theorem");
    check_tolerance(est_opts.tolerance);
    check_tail(est_opts.tail);
    std::vector<Independence> dims;
    for (std::size_t p = 1; p <= static_cast<std::size_t>(theta.dim()); ++p) {
      dims.push_back(dimension_status(theta, p));
      if (dims.back() == Independence::failed) {
        io.err << "error: dimension condition dim span_Q(1, theta_1, ..., theta_n) >= p fails for p = " << p;
        if (theta.n == 1 && theta.entries[0].is_rational()) io.err << " (theta is rational)";
        io.err << "\n";
        return usage_error;
      }
    }
    Independence indep = independence_status(theta);
    ExponentEstimates est = est_opts.estimate(theta, PathMode::primal, problem.requested(), common);
    InequalityReport rep = check_main_inequalities(est, theta.n, est_opts.tolerance, dims, indep);

    io.out << "independence of 1, theta: " << to_string(indep) << "\n";
    print_window(io.out, est);
    io.out << "p  dim-condition  first: lhs <= rhs  second: lhs <= rhs\n";
    for (const auto& row : rep.rows)
      io.out << row.p << "  " << to_string(row.dimension) << "  " << num(row.lhs_first) << " <= "
             << num(row.rhs_first) << (row.pass_first ? "" : " FAIL") << "  " << num(row.lhs_second) << " <= "
             << num(row.rhs_second) << (row.pass_second ? "" : " FAIL") << "\n";
    for (const auto& row : rep.rows) {
      if (!row.pass_first)
        io.err << "failed: main-inequality-1, p = " << row.p << ", excess " << num(row.lhs_first - row.rhs_first)
               << "\n";
      if (!row.pass_second)
        io.err << "failed: main-inequality-2, p = " << row.p << ", excess " << num(row.lhs_second - row.rhs_second)
               << "\n";
    }
    io.out << (rep.pass() ? "theorem inequalities hold" : "theorem inequalities FAILED") << " at tolerance "
           << num(est_opts.tolerance) << "\n";
    return rep.pass() ? ok : check_failed;
  }
};

struct TransferenceCommand {
  Common common;
  Problem problem;
  EstimateOptions est_opts{0.1};

  void attach(CLI::App* app) {
    common.attach(app);
    problem.attach(app, false);
    est_opts.attach(app);
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    require_single_column(theta, "verify transference");
    check_tolerance(est_opts.tolerance);
    check_tail(est_opts.tail);
    if (!est_opts.range.u_max.empty()) throw UsageError("verify transference takes --s-max, not --u-max");
    // The dual box at s is the polar of the primal box at n s.
    ExponentEstimates dual = est_opts.estimate(theta, PathMode::dual, problem.requested(), common);
    ExponentEstimates primal =
        est_opts.estimate(theta, PathMode::primal, problem.requested(), common, static_cast<double>(theta.n));
    TransferenceReport rep = check_transference(primal, dual, theta.n, est_opts.tolerance);

    io.out << "dual ";
    print_window(io.out, dual);
    io.out << "primal ";
    print_window(io.out, primal);
    io.out << "p  lower-gap  upper-gap\n";
    for (const auto& row : rep.rows)
      io.out << row.p << "  " << num(row.lower_gap) << "  " << num(row.upper_gap) << (row.pass ? "" : "  FAIL")
             << "\n";
    for (const auto& row : rep.rows) {
      if (row.lower_gap > est_opts.tolerance)
        io.err << "failed: transference-lower, p = " << row.p << ", gap " << num(row.lower_gap) << "\n";
      if (row.upper_gap > est_opts.tolerance)
        io.err << "failed: transference-upper, p = " << row.p << ", gap " << num(row.upper_gap) << "\n";
    }
    io.out << (rep.pass() ? "transference holds" : "transference FAILED") << " at tolerance "
           << num(est_opts.tolerance) << "\n";
    return rep.pass() ? ok : check_failed;
  }
};

struct BoundsCommand {
  Common common;
  Problem problem;
  EstimateOptions est_opts{0.02};

  void attach(CLI::App* app) {
    common.attach(app);
    problem.attach(app);
    est_opts.attach(app);
  }

  int run(Io io) {
    ThetaSpec theta = problem.resolve(io.err);
    check_tolerance(est_opts.tolerance);
    check_tail(est_opts.tail);
    PathMode mode = problem.path_mode();
    ExponentEstimates est = est_opts.estimate(theta, mode, problem.requested(), common);
    BoundsReport rep = check_bounds(est, theta.m, theta.n, est_opts.tolerance, mode);
    print_window(io.out, est);
    io.out << "p  " << num(rep.floor) << " <= lower <= upper <= " << num(rep.ceiling) << "\n";
    for (const auto& row : rep.rows) {
      io.out << row.p << "  " << num(row.lower) << "  " << num(row.upper) << (row.pass ? "" : "  FAIL") << "\n";
      if (!row.pass)
        io.err << "failed: bounds-chain, p = " << row.p << ": " << num(row.lower) << ", " << num(row.upper) << "\n";
    }
    io.out << (rep.pass() ? "bounds hold" : "bounds FAILED") << " at tolerance " << num(est_opts.tolerance) << "\n";
    return rep.pass() ? ok : check_failed;
  }
};

// ---------------------------------------------------------------- config file

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      s.erase(s.find_last_not_of(ws) + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

void apply_config(CLI::App* app, const std::string& path) {
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config") throw UsageError("config files cannot include other config files");
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (!opt) throw UsageError("unknown config key '" + key + "' for " + app->get_name());
    if (opt->count() > 0) continue;  // given on the command line
    std::istringstream tokens(value);
    for (std::string tok; tokens >> tok;) opt->add_result(tok);
    opt->run_callback();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Successive minima of box flows and Diophantine exponent estimates", "minflow"};
  app.require_subcommand(1);

  TraceCommand trace;
  EventsCommand events;
  ExponentsCommand exponents;
  LemmaCommand lemma;
  CorollaryCommand corollary;
  TheoremCommand theorem;
  TransferenceCommand transference;
  BoundsCommand bounds;

  struct Leaf {
    CLI::App* app;
    std::function<int(Io)> run;
    const std::string* config;
  };
  std::vector<Leaf> leaves;
  auto add = [&](CLI::App* parent, const char* name, const char* help, auto& cmd) {
    CLI::App* sub = parent->add_subcommand(name, help);
    cmd.attach(sub);
    leaves.push_back({sub, [&cmd](Io io) { return cmd.run(io); }, &cmd.common.config});
  };
  add(&app, "trace", "psi trace of the flow as CSV", trace);
  add(&app, "events", "Front-facet events as CSV", events);
  add(&app, "exponents", "Finite-range estimates of the psi exponents and derived beta, alpha", exponents);
  CLI::App* verify = app.add_subcommand("verify", "Verification campaigns");
  verify->require_subcommand(1);
  add(verify, "lemma", "Randomized front-facet lemma trials", lemma);
  add(verify, "corollary", "Companion-scale ratios at front-facet events", corollary);
  add(verify, "theorem", "Both main inequalities on the estimated exponents", theorem);
  add(verify, "transference", "Primal and dual exponents against each other", transference);
  add(verify, "bounds", "-1 <= lower <= upper <= m/n chain", bounds);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  Io io{out, err};
  try {
    for (const auto& leaf : leaves) {
      if (!leaf.app->parsed()) continue;
      if (!leaf.config->empty()) apply_config(leaf.app, *leaf.config);
      return leaf.run(io);
    }
    err << "error: no command given\n";
    return usage_error;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const HypothesisViolation& e) {
    err << "error: instance violates the hypotheses: " << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "; raise --budget or shrink the range\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return usage_error;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace minflow::cli
