#include "minflow/verify.hpp"

#include "minflow/reduction.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace minflow {

namespace {

constexpr const char* kReplayTag = "minflow-lemma-instance 1";

Box rational_box(const RatVector& h) {
  Box b;
  for (const auto& x : h) b.h.emplace_back(x);
  return b;
}

Rational random_rational(std::mt19937_64& rng, long lo_num, long hi_num, long den) {
  std::uniform_int_distribution<long> pick(lo_num, hi_num);
  Rational r(pick(rng), den);
  r.canonicalize();
  return r;
}

void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.dim(); ++c) std::swap(m(a, c), m(b, c));
}

std::size_t rank_of(const std::vector<LatticePoint>& pts, std::size_t d) {
  SpanTracker span(d);
  for (const auto& v : pts) {
    span.add(v.coords);
    if (span.rank() == d) break;
  }
  return span.rank();
}

std::string field_line(std::istream& is, const std::string& key) {
  std::string line;
  while (std::getline(is, line) && line.empty()) {
  }
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key) throw std::invalid_argument("replay file: expected field '" + key + "'");
  std::string rest;
  std::getline(ls, rest);
  return rest;
}

RatVector check_hypotheses(const LemmaInstance& in) {
  const std::size_t d = in.lattice.dim();
  if (d == 0 || in.lattice.basis.determinant() == 0) throw HypothesisViolation("lattice basis is singular");
  if (in.h.size() != d || in.v.size() != d) throw HypothesisViolation("dimension mismatch");
  for (const auto& x : in.h)
    if (x <= 0) throw HypothesisViolation("half-widths must be positive");
  if (in.lambda < 1) throw HypothesisViolation("lambda must be at least 1");
  if (in.p < 1 || in.p > d) throw HypothesisViolation("p must lie in [1, d]");
  const RatVector vz = in.lattice.basis.apply(in.v);
  if (vz[0] != in.h[0]) throw HypothesisViolation("v does not have first coordinate h_1");
  for (std::size_t i = 1; i < d; ++i)
    if (abs(vz[i]) > in.h[i]) throw HypothesisViolation("v is not in P1");
  return vz;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Lattice random_unimodular_lattice(std::uint64_t seed, std::size_t d, long entry_bound, std::size_t shears) {
  if (d < 2) throw std::invalid_argument("random lattice needs d >= 2");
  if (entry_bound < 1) throw std::invalid_argument("entry bound must be at least 1");
  std::mt19937_64 rng(seed);
  if (shears == 0) shears = d + 1;
  std::uniform_int_distribution<std::size_t> index(0, d - 1);
  std::uniform_int_distribution<long> coef(1, entry_bound);
  std::bernoulli_distribution negative(0.5);
  Matrix m = Matrix::identity(d);
  for (std::size_t k = 0; k < shears; ++k) {
    std::size_t i = index(rng), j = index(rng);
    while (j == i) j = index(rng);
    long c = coef(rng);
    if (negative(rng)) c = -c;
    for (std::size_t col = 0; col < d; ++col) m(i, col) += Rational(c) * m(j, col);
  }
  Lattice l;
  l.basis = std::move(m);
  return l;
}

LemmaReport lemma_core_check(const LemmaInstance& in, bool confirm_by_enumeration, const EnumerationBudget& budget) {
  const std::size_t d = in.lattice.dim();
  check_hypotheses(in);

  SpanTracker span(d);
  span.add(in.v);
  std::vector<IntVector> partners;
  std::vector<LatticePoint> p2 = enumerate_in_box(in.lattice, rational_box(in.h), ScaleValue(in.lambda), budget);
  for (const auto& pt : p2) {
    if (span.rank() == in.p) break;
    if (span.add(pt.coords)) partners.push_back(pt.coords);
  }
  if (span.rank() < in.p) throw HypothesisViolation("P2 holds fewer than p independent lattice points");
  return lemma_core_check(in, std::move(partners), confirm_by_enumeration, budget);
}

LemmaReport lemma_core_check(const LemmaInstance& in, std::vector<IntVector> partners, bool confirm_by_enumeration,
                             const EnumerationBudget& budget) {
  const std::size_t d = in.lattice.dim();
  const RatVector vz = check_hypotheses(in);
  if (partners.size() + 1 != in.p) throw HypothesisViolation("need exactly p - 1 partner points");
  SpanTracker span(d);
  span.add(in.v);
  for (const auto& vi : partners) {
    if (vi.size() != d) throw HypothesisViolation("dimension mismatch");
    RatVector zi = in.lattice.basis.apply(vi);
    for (std::size_t j = 0; j < d; ++j)
      if (abs(zi[j]) > in.lambda * in.h[j]) throw HypothesisViolation("partner point is not in P2");
    if (!span.add(vi)) throw HypothesisViolation("partner points are not independent of v");
  }

  LemmaReport r;
  r.partners = std::move(partners);
  r.multipliers_bounded = r.first_coordinate_reduced = r.inside_double_p3 = r.strict = true;
  for (IntVector vi : r.partners) {
    RatVector zi = in.lattice.basis.apply(vi);
    // sign normalization v_i1 >= 0
    if (zi[0] < 0) {
      for (auto& c : vi) c = -c;
      for (auto& c : zi) c = -c;
    }
    const Integer k = floor(zi[0] / vz[0]);
    IntVector vp(d);
    RatVector zp(d);
    for (std::size_t j = 0; j < d; ++j) {
      vp[j] = vi[j] - k * in.v[j];
      zp[j] = zi[j] - Rational(k) * vz[j];
    }
    if (k < 0 || Rational(k) > in.lambda) r.multipliers_bounded = false;
    if (!(Rational(k) < in.lambda)) r.strict = false;
    if (zp[0] < 0 || !(zp[0] < vz[0])) r.first_coordinate_reduced = false;
    if (abs(zp[0]) > 2 * in.h[0]) r.inside_double_p3 = false;
    for (std::size_t j = 1; j < d; ++j) {
      const Rational bound = 2 * in.lambda * in.h[j];
      if (abs(zp[j]) > bound) r.inside_double_p3 = false;
      if (!(abs(zp[j]) < bound)) r.strict = false;
    }
    r.multipliers.push_back(k);
    r.constructed.push_back(std::move(vp));
    r.constructed_z.push_back(std::move(zp));
  }

  SpanTracker built(d);
  built.add(in.v);
  for (const auto& c : r.constructed) built.add(c);
  r.independent = built.rank() == in.p;

  if (confirm_by_enumeration) {
    RatVector h3 = in.h;
    for (std::size_t j = 1; j < d; ++j) h3[j] *= in.lambda;
    std::vector<LatticePoint> p3 = enumerate_in_box(in.lattice, rational_box(h3), ScaleValue(Rational(2)), budget);
    r.enumeration_confirms = rank_of(p3, d) >= in.p;
  } else {
    r.enumeration_confirms = true;
  }
  return r;
}

LemmaInstance generate_lemma_instance(std::mt19937_64& rng, std::size_t d, long entry_bound,
                                      const EnumerationBudget& budget) {
  LemmaInstance in;
  in.lattice = random_unimodular_lattice(rng(), d, entry_bound);
  for (std::size_t i = 0; i < d; ++i) in.h.push_back(random_rational(rng, 4, 64, 16));

  MinimaResult first = successive_minima(in.lattice, rational_box(in.h), 1, budget);
  const Rational lambda1 = first.lambdas[0].as_rational();
  LatticePoint w = first.witnesses[0];
  std::size_t k = 0;
  while (abs(w.z[k]) != lambda1 * in.h[k]) ++k;
  // bring the attaining coordinate to the front
  swap_rows(in.lattice.basis, 0, k);
  std::swap(in.h[0], in.h[k]);
  std::swap(w.z[0], w.z[k]);
  for (auto& x : in.h) x *= lambda1;
  in.v = w.coords;
  if (w.z[0] < 0)
    for (auto& c : in.v) c = -c;

  in.lambda = random_rational(rng, 8, 32, 8);
  std::uniform_int_distribution<std::size_t> pick_p(2, d);
  in.p = pick_p(rng);
  for (int attempt = 0;; ++attempt) {
    auto pts = enumerate_in_box(in.lattice, rational_box(in.h), ScaleValue(in.lambda), budget);
    if (rank_of(pts, d) >= in.p) break;
    if (attempt == 16) throw HypothesisViolation("could not reach rank p by raising lambda");
    in.lambda *= 2;
  }
  return in;
}

void write_instance(std::ostream& os, const LemmaInstance& in) {
  const std::size_t d = in.lattice.dim();
  os << kReplayTag << '\n' << "d " << d << '\n' << "basis";
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) os << ' ' << to_string(in.lattice.basis(r, c));
  os << '\n' << "h";
  for (const auto& x : in.h) os << ' ' << to_string(x);
  os << '\n' << "lambda " << to_string(in.lambda) << '\n' << "p " << in.p << '\n' << "v";
  for (const auto& x : in.v) os << ' ' << to_string(x);
  os << '\n';
}

LemmaInstance read_instance(std::istream& is) {
  std::string tag;
  std::getline(is, tag);
  if (tag != kReplayTag) throw std::invalid_argument("not a lemma replay file");
  LemmaInstance in;
  std::size_t d = 0;
  std::istringstream(field_line(is, "d")) >> d;
  if (d < 1) throw std::invalid_argument("replay file: bad dimension");
  auto read_values = [&](const std::string& key, std::size_t count) {
    std::istringstream ls(field_line(is, key));
    std::vector<std::string> out;
    for (std::string tok; ls >> tok;) out.push_back(tok);
    if (out.size() != count) throw std::invalid_argument("replay file: wrong number of entries for " + key);
    return out;
  };
  auto basis = read_values("basis", d * d);
  in.lattice.basis = Matrix(d);
  for (std::size_t i = 0; i < d * d; ++i) in.lattice.basis(i / d, i % d) = parse_rational(basis[i]);
  for (const auto& s : read_values("h", d)) in.h.push_back(parse_rational(s));
  in.lambda = parse_rational(read_values("lambda", 1)[0]);
  in.p = std::stoul(read_values("p", 1)[0]);
  for (const auto& s : read_values("v", d)) in.v.push_back(Integer(s));
  return in;
}

LemmaCampaign run_lemma_campaign(std::uint64_t seed, std::size_t d, std::size_t trials, Execution exec,
                                 const std::optional<std::filesystem::path>& replay_dir,
                                 bool confirm_by_enumeration, const EnumerationBudget& budget) {
  enum class Outcome : char { pass, rejected, violation };
  std::vector<Outcome> outcome(trials, Outcome::pass);
  std::vector<char> strict(trials, 0);
  std::vector<std::optional<LemmaInstance>> failing(trials);
  run_indexed(trials, exec, [&](std::size_t i) {
    std::mt19937_64 rng(split_seed(seed, i));
    LemmaInstance in;
    try {
      in = generate_lemma_instance(rng, d, 3, budget);
      LemmaReport r = lemma_core_check(in, confirm_by_enumeration, budget);
      strict[i] = r.strict;
      if (!r.pass()) {
        outcome[i] = Outcome::violation;
        failing[i] = std::move(in);
      }
    } catch (const HypothesisViolation&) {
      outcome[i] = Outcome::rejected;
    }
  });

  LemmaCampaign c;
  c.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    switch (outcome[i]) {
      case Outcome::pass: ++c.passed; break;
      case Outcome::rejected: ++c.rejected; break;
      case Outcome::violation:
        ++c.violations;
        c.failing_trials.push_back(i);
        if (replay_dir) {
          std::filesystem::create_directories(*replay_dir);
          auto path = *replay_dir / ("lemma-" + std::to_string(seed) + "-" + std::to_string(i) + ".txt");
          std::ofstream os(path);
          write_instance(os, *failing[i]);
          c.replay_files.push_back(path);
        }
        break;
    }
    c.strict += strict[i];
  }
  return c;
}

CorollaryCampaign run_corollary(const Flow& flow, const Rational& u_min, const Rational& u_max,
                                std::size_t grid_count, std::size_t p, std::size_t max_events, Execution exec,
                                const EnumerationBudget& budget) {
  CorollaryCampaign c;
  c.events = front_facet_events(flow.lattice, flow.path, u_min, u_max, grid_count, exec, budget);
  if (c.events.size() > max_events) c.events.resize(max_events);
  c.reports.resize(c.events.size());
  run_indexed(c.events.size(), exec, [&](std::size_t i) {
    c.reports[i] = verify_event_relations(flow.lattice, flow.path, c.events[i], p, flow.mode, budget);
  });
  for (const auto& r : c.reports) {
    if (!r.companion_in_range) {
      ++c.out_of_range;
      continue;
    }
    if (!r.ratios_pass()) ++c.ratio_failures;
    if (!r.brackets_pass()) ++c.bracket_failures;
  }
  return c;
}

}  // namespace minflow
