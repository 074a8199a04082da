// Acceptance run: one PASS/FAIL line per criterion.
//
//   minflow_acceptance            all criteria
//   minflow_acceptance 3 7        selected criteria
//
// Exit status is 0 when every selected criterion passes.

#include "minflow/events.hpp"
#include "minflow/exponents.hpp"
#include "minflow/minima.hpp"
#include "minflow/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace minflow;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ThetaSpec theta_of(std::initializer_list<const char*> entries) {
  ThetaSpec t;
  t.m = 1;
  t.n = static_cast<int>(entries.size());
  for (const char* e : entries) t.entries.push_back(parse_real_spec(e));
  return t;
}

const Rational kRequested = parse_rational("1e-30");
const double kSMax = 25;
const double kTail = 0.5;
const std::size_t kSamples = 200;

struct Case {
  std::string name;
  ThetaSpec theta;
};

std::vector<Case> corpus() {
  return {{"golden", theta_of({"cf:[1;(1)]"})},
          {"sqrt2", theta_of({"cf:[1;(2)]"})},
          {"liouville", theta_of({"liouville:10"})},
          {"22/7", theta_of({"rat:22/7"})},
          {"pair", theta_of({"cf:[0;(2)]", "cf:[0;(1,2)]"})}};
}

PathSpec path_of(const ThetaSpec& theta, PathMode mode) {
  return mode == PathMode::primal ? primal_path(theta.m, theta.n) : dual_path(theta.m, theta.n);
}

ExponentEstimates estimates(const ThetaSpec& theta, PathMode mode, double s_max = kSMax) {
  Rational u_max = path_of(theta, mode).u_for_s(s_max);
  Flow flow = make_flow(theta, mode, kRequested, u_max);
  TraceConfig cfg;
  cfg.u_max = u_max;
  cfg.samples = kSamples;
  cfg.p_max = static_cast<std::size_t>(theta.dim());
  Trace trace = psi_trace(flow.lattice, flow.path, cfg);
  return estimate_exponents(trace, kTail);
}

// ---------------------------------------------------------------- 1

Outcome lemma_suite() {
  Outcome o;
  for (std::size_t d : {2UL, 3UL, 4UL}) {
    LemmaCampaign c = run_lemma_campaign(2024, d, 1000, Execution::parallel, std::nullopt, true);
    o.require(c.pass() && c.rejected == 0, "d=" + std::to_string(d));
    o.note("d=" + std::to_string(d) + " " + std::to_string(c.passed) + "/1000 pass, " +
           std::to_string(c.violations) + " violations");
  }
  return o;
}

// ---------------------------------------------------------------- 2

Outcome corollary_ratios() {
  struct Run {
    std::string name;
    ThetaSpec theta;
    PathMode mode;
    Rational u_max;
    std::size_t grid;
  };
  std::vector<Run> runs = {
      {"golden", theta_of({"cf:[1;(1)]"}), PathMode::primal, Rational(100000000), 1500},
      {"sqrt2", theta_of({"cf:[1;(2)]"}), PathMode::primal, parse_rational("1e14"), 1500},
      {"pair", theta_of({"cf:[0;(2)]", "cf:[0;(1,2)]"}), PathMode::primal, Rational(100000000), 1000},
  };
  Outcome o;
  for (const auto& r : runs) {
    Flow flow = make_flow(r.theta, r.mode, kRequested, r.u_max);
    CorollaryCampaign c = run_corollary(flow, Rational(3), r.u_max, r.grid, 2, 30);
    std::size_t exact_ok = 0;
    for (const auto& rep : c.reports)
      if (rep.companion_in_range && rep.ratios_pass()) ++exact_ok;
    o.require(c.events.size() >= 30, r.name + " found only " + std::to_string(c.events.size()) + " events");
    o.require(exact_ok == c.events.size(), r.name + " ratios");
    o.note(r.name + " " + std::to_string(exact_ok) + "/" + std::to_string(c.events.size()));
  }
  return o;
}

// ---------------------------------------------------------------- 3

Outcome golden_exponents() {
  Outcome o;
  ThetaSpec golden = theta_of({"cf:[1;(1)]"});
  ExponentEstimates est = estimates(golden, PathMode::primal);
  for (std::size_t p = 0; p < 2; ++p) {
    o.require(std::fabs(est.lower[p]) <= 0.05, "|lower_" + std::to_string(p + 1) + "| = " + fmt(est.lower[p]));
    o.require(std::fabs(est.upper[p]) <= 0.05, "|upper_" + std::to_string(p + 1) + "| = " + fmt(est.upper[p]));
  }
  double beta = beta_alpha_from_psi(est, 1, 1)[0].beta.value();
  o.require(beta >= 0.9 && beta <= 1.1, "beta_1 range");

  Rational t_max(1000000);
  Flow primal = make_flow(golden, PathMode::primal, kRequested, t_max);
  DirectEstimate direct = beta_alpha_direct(primal.lattice, 1, geometric_grid(Rational(2), t_max, 40), kTail);
  double gap = std::fabs(direct.beta.value() - beta);
  o.require(gap <= 0.1, "direct gap");
  o.note("psi in [" + fmt(std::min(est.lower[0], est.lower[1])) + ", " + fmt(std::max(est.upper[0], est.upper[1])) +
         "], beta_1 " + fmt(beta) + ", direct " + fmt(direct.beta.value()));
  return o;
}

// ---------------------------------------------------------------- 4

Outcome liouville_exponents() {
  Outcome o;
  ThetaSpec liou = theta_of({"liouville:10"});
  ExponentEstimates est = estimates(liou, PathMode::primal);
  o.require(est.lower[0] <= -0.9, "lower_1 = " + fmt(est.lower[0]) + " > -0.9");

  // heights up to e^{s_max}, the range the flow covers
  Rational t_max = primal_path(1, 1).u_for_s(kSMax);
  Flow primal = make_flow(liou, PathMode::primal, kRequested, t_max);
  DirectEstimate direct = beta_alpha_direct(primal.lattice, 1, geometric_grid(Rational(2), t_max, 40), kTail);
  o.require(!(direct.beta < Exponent::finite(10)), "direct beta_1 = " + direct.beta.to_string(4) + " < 10");
  o.note("lower_1 " + fmt(est.lower[0]) + ", direct beta_1 " + direct.beta.to_string(4) + " for t <= " +
         fmt(t_max.get_d()));
  return o;
}

// ---------------------------------------------------------------- 5

Outcome trivial_flow() {
  Outcome o;
  for (int n : {1, 2}) {
    ThetaSpec zero;
    zero.m = 1;
    zero.n = n;
    for (int i = 0; i < n; ++i) zero.entries.push_back(parse_real_spec("rat:0"));
    Flow flow = make_flow(zero, PathMode::primal, kRequested, Rational(1000000));
    TraceConfig cfg;
    cfg.u_max = 1000000;
    cfg.samples = 100;
    cfg.p_max = static_cast<std::size_t>(n + 1);
    Trace t = psi_trace(flow.lattice, flow.path, cfg);
    std::size_t exact = 0;
    for (const auto& smp : t.samples) {
      bool ok = smp.lambdas[0] == smp.u.pow(-n) && smp.psi[0] == -1.0;
      for (std::size_t p = 1; p < smp.lambdas.size(); ++p)
        ok = ok && smp.lambdas[p] == smp.u && std::fabs(smp.psi[p] - 1.0 / n) <= 1e-15;
      exact += ok;
    }
    o.require(exact == t.samples.size(), "n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " " + std::to_string(exact) + "/" + std::to_string(t.samples.size()) +
           " samples exact");
  }
  return o;
}

// ---------------------------------------------------------------- 6

Outcome bounds_chain() {
  Outcome o;
  std::size_t rows = 0;
  for (const auto& c : corpus()) {
    for (PathMode mode : {PathMode::primal, PathMode::dual}) {
      ExponentEstimates est = estimates(c.theta, mode);
      BoundsReport rep = check_bounds(est, c.theta.m, c.theta.n, 0.02, mode);
      rows += rep.rows.size();
      o.require(rep.pass(), c.name + (mode == PathMode::primal ? " primal" : " dual"));
    }
  }
  o.note(std::to_string(rows) + " rows over " + std::to_string(corpus().size()) + " theta, both flows");
  return o;
}

// ---------------------------------------------------------------- 7

Outcome transference() {
  Outcome o;
  for (const auto& [name, theta] : {Case{"sqrt2", theta_of({"cf:[1;(2)]"})},
                                    Case{"pair", theta_of({"cf:[0;(2)]", "cf:[0;(1,2)]"})}}) {
    ExponentEstimates dual = estimates(theta, PathMode::dual);
    ExponentEstimates primal = estimates(theta, PathMode::primal, kSMax * theta.n);
    TransferenceReport rep = check_transference(primal, dual, theta.n, 0.1);
    double worst = 0;
    for (const auto& r : rep.rows) worst = std::max({worst, r.lower_gap, r.upper_gap});
    o.require(rep.pass(), name);
    o.note(name + " max gap " + fmt(worst));
  }
  return o;
}

// ---------------------------------------------------------------- 8

ExponentEstimates fabricated(std::vector<double> lower, std::vector<double> upper) {
  ExponentEstimates e;
  e.p_max = lower.size();
  e.lower = std::move(lower);
  e.upper = std::move(upper);
  return e;
}

Outcome main_theorem() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& c : corpus()) {
    std::vector<Independence> dims;
    bool eligible = true;
    for (std::size_t p = 1; p <= static_cast<std::size_t>(c.theta.dim()); ++p) {
      dims.push_back(dimension_status(c.theta, p));
      eligible = eligible && dims.back() != Independence::failed;
    }
    if (!eligible) {
      o.note(c.name + " excluded by the dimension condition");
      continue;
    }
    ExponentEstimates est = estimates(c.theta, PathMode::primal);
    InequalityReport rep = check_main_inequalities(est, c.theta.n, 0.05, dims, independence_status(c.theta));
    o.require(rep.pass(), c.name);
    ++checked;
  }
  o.note(std::to_string(checked) + " theta pass");

  // negative controls must fail
  InequalityReport first = check_main_inequalities(fabricated({-0.5, 0}, {0, 0}), 1, 0.05);
  InequalityReport second = check_main_inequalities(fabricated({0, 0}, {0, 0.5}), 1, 0.05);
  o.require(!first.pass() && !second.pass(), "negative controls");
  o.note("negative controls rejected");
  return o;
}

// ---------------------------------------------------------------- 9

Outcome engine_equivalence() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 997), side(1, 64);
  std::size_t identical = 0, band = 0, unit = 0;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const int n = trial % 2 == 0 ? 1 : 2;
    const std::size_t d = static_cast<std::size_t>(n + 1);
    RatVector theta;
    for (int i = 0; i < n; ++i) theta.push_back(Rational(num(rng), den(rng)));
    for (auto& t : theta) t.canonicalize();
    Lattice lattice = primal_lattice(1, n, theta);

    // half of the boxes have unit volume
    RatVector h;
    for (std::size_t i = 0; i < d; ++i) h.push_back(Rational(side(rng), 8));
    for (auto& x : h) x.canonicalize();
    const bool unit_volume = trial % 4 < 2;
    if (unit_volume) {
      Rational rest = 1;
      for (std::size_t i = 0; i + 1 < d; ++i) rest *= h[i];
      h[d - 1] = 1 / rest;
    }
    Box box;
    for (const auto& x : h) box.h.emplace_back(x);

    MinimaResult generic = successive_minima(lattice, box, d);
    MinimaResult fast = scan_minima(theta, box, d);
    bool same = generic.lambdas == fast.lambdas;
    for (std::size_t p = 0; same && p < d; ++p) same = generic.witnesses[p].coords == fast.witnesses[p].coords;
    identical += same;

    if (unit_volume) {
      ++unit;
      ScaleValue product;
      for (const auto& l : generic.lambdas) product *= l;
      Rational factorial = d == 2 ? 2 : 6;
      band += ScaleValue(1 / factorial) <= product && product <= ScaleValue(Rational(1));
    }
  }
  o.require(identical == 100, "fast path differs");
  o.require(band == unit, "Minkowski band");
  o.note(std::to_string(identical) + "/100 identical, band " + std::to_string(band) + "/" + std::to_string(unit));

  // the band on generic unimodular lattices
  std::size_t generic_band = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 2;
    Lattice lattice = random_unimodular_lattice(split_seed(77, trial), d, 4);
    Box box;
    Rational rest = 1;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      Rational x(side(rng), 8);
      x.canonicalize();
      rest *= x;
      box.h.emplace_back(x);
    }
    box.h.emplace_back(Rational(1 / rest));
    MinimaResult r = successive_minima(lattice, box, d);
    ScaleValue product;
    for (const auto& l : r.lambdas) product *= l;
    Rational factorial = d == 2 ? 2 : 6;
    generic_band += ScaleValue(1 / factorial) <= product && product <= ScaleValue(Rational(1));
  }
  o.require(generic_band == 50, "Minkowski band on unimodular lattices");
  return o;
}

// ---------------------------------------------------------------- 10

Outcome determinism() {
  Outcome o;
  struct Run {
    std::string name;
    ThetaSpec theta;
    PathMode mode;
  };
  for (const auto& r : {Run{"golden", theta_of({"cf:[1;(1)]"}), PathMode::primal},
                        Run{"sqrt2 dual", theta_of({"cf:[1;(2)]"}), PathMode::dual},
                        Run{"pair", theta_of({"cf:[0;(2)]", "cf:[0;(1,2)]"}), PathMode::primal}}) {
    TraceConfig cfg;
    cfg.u_max = path_of(r.theta, r.mode).u_for_s(kSMax);
    cfg.samples = kSamples;
    cfg.p_max = static_cast<std::size_t>(r.theta.dim());
    Rational f = faithfulness_policy(kRequested, cfg.u_max, r.theta.dim());
    StabilityReport s = check_stability(r.theta, r.mode, f, cfg);
    o.require(s.pass(), r.name + " precision");

    Flow flow = make_flow(r.theta, r.mode, kRequested, cfg.u_max);
    TraceConfig serial = cfg;
    serial.exec = Execution::serial;
    bool repeat = trace_csv(psi_trace(flow.lattice, flow.path, cfg)) ==
                  trace_csv(psi_trace(flow.lattice, flow.path, serial));
    o.require(repeat, r.name + " rerun");
    o.note(r.name + " " + std::to_string(s.samples) + " samples identical");
  }

  LemmaCampaign a = run_lemma_campaign(11, 3, 200, Execution::parallel);
  LemmaCampaign b = run_lemma_campaign(11, 3, 200, Execution::serial);
  o.require(a.passed == b.passed && a.strict == b.strict && a.rejected == b.rejected, "lemma seed rerun");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"lemma suite", lemma_suite}},
      {2, {"event ratios", corollary_ratios}},
      {3, {"badly approximable exponents", golden_exponents}},
      {4, {"Liouville exponents", liouville_exponents}},
      {5, {"trivial flow", trivial_flow}},
      {6, {"bounds chain", bounds_chain}},
      {7, {"transference", transference}},
      {8, {"main inequalities", main_theorem}},
      {9, {"engine equivalence", engine_equivalence}},
      {10, {"determinism and stability", determinism}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, _] : criteria) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k << " (" << it->second.first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << "  [" << fmt(secs, 3) << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
