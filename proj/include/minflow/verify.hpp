// Randomized checks of the front-facet lemma and the event-ratio campaign.
#pragma once

#include "minflow/events.hpp"
#include "minflow/execution.hpp"
#include "minflow/exponents.hpp"
#include "minflow/lattice.hpp"
#include "minflow/minima.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace minflow {

/// Product of `shears` random elementary integer shears with coefficients in
/// [-entry_bound, entry_bound]; 0 picks d + 1 shears.
Lattice random_unimodular_lattice(std::uint64_t seed, std::size_t d, long entry_bound, std::size_t shears = 0);

/// Independent stream for trial `index` of a campaign seeded with `seed`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// Box P1 = { |z_i| <= h_i } with a lattice point v on it, v_1 = h_1, and
/// P2 = lambda P1 holding at least p independent lattice points.
struct LemmaInstance {
  Lattice lattice;
  RatVector h;
  Rational lambda = 1;
  std::size_t p = 1;
  IntVector v;  // coordinates in the lattice basis
};

/// The instance does not satisfy the hypotheses; not a failure of the check.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LemmaReport {
  std::vector<IntVector> partners;     // v_1..v_{p-1} taken from P2
  std::vector<IntVector> constructed;  // v'_i = v_i - k_i v
  std::vector<RatVector> constructed_z;
  std::vector<Integer> multipliers;    // k_i = floor(v_i1 / v_1)
  bool multipliers_bounded = false;    // 0 <= k_i <= lambda
  bool first_coordinate_reduced = false;  // 0 <= v'_i1 < v_1
  bool inside_double_p3 = false;       // every v' and v in 2 P3 (closed)
  bool independent = false;
  bool enumeration_confirms = false;   // 2 P3 holds p independent points by direct enumeration
  bool strict = false;                 // k_i < lambda and |v'_ij| < 2 lambda h_j everywhere

  bool pass() const {
    return multipliers_bounded && first_coordinate_reduced && inside_double_p3 && independent &&
           enumeration_confirms;
  }
};

/// Throws HypothesisViolation when the instance is malformed. The partner
/// points v_1..v_{p-1} are picked from P2 by enumeration.
LemmaReport lemma_core_check(const LemmaInstance& instance, bool confirm_by_enumeration = true,
                             const EnumerationBudget& budget = {});
/// Same with given partners, which must lie in P2 and be independent with v.
LemmaReport lemma_core_check(const LemmaInstance& instance, std::vector<IntVector> partners,
                             bool confirm_by_enumeration = true, const EnumerationBudget& budget = {});

/// Random lattice and box, rescaled so that a first-minimum point lands on
/// the first facet; p is drawn from [2, d] and lambda from [1, 4], raised
/// until lambda P1 reaches rank p.
LemmaInstance generate_lemma_instance(std::mt19937_64& rng, std::size_t d, long entry_bound = 3,
                                      const EnumerationBudget& budget = {});

/// Text, one line per field, exact rationals.
void write_instance(std::ostream& os, const LemmaInstance& instance);
LemmaInstance read_instance(std::istream& is);

struct LemmaCampaign {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::size_t rejected = 0;  // hypothesis violations
  std::size_t violations = 0;
  std::size_t strict = 0;
  std::vector<std::size_t> failing_trials;
  std::vector<std::filesystem::path> replay_files;
  bool pass() const { return violations == 0 && passed + rejected == trials; }
};

/// Failing instances are written to replay_dir (when given) as
/// lemma-<seed>-<trial>.txt.
LemmaCampaign run_lemma_campaign(std::uint64_t seed, std::size_t d, std::size_t trials,
                                 Execution exec = Execution::parallel,
                                 const std::optional<std::filesystem::path>& replay_dir = std::nullopt,
                                 bool confirm_by_enumeration = true, const EnumerationBudget& budget = {});

struct CorollaryCampaign {
  std::vector<Event> events;
  std::vector<EventRelationReport> reports;
  std::size_t ratio_failures = 0;
  std::size_t bracket_failures = 0;
  std::size_t out_of_range = 0;  // companion scale at or below 1
  bool pass() const { return ratio_failures == 0 && bracket_failures == 0; }
};

/// Event relations for the first max_events events of the flow in [u_min, u_max].
CorollaryCampaign run_corollary(const Flow& flow, const Rational& u_min, const Rational& u_max,
                                std::size_t grid_count, std::size_t p, std::size_t max_events,
                                Execution exec = Execution::parallel, const EnumerationBudget& budget = {});

}  // namespace minflow
