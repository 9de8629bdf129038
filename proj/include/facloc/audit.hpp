#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "facloc/coalition_rule.hpp"
#include "facloc/median_rule.hpp"

namespace facloc {

/// Thrown when a requested exhaustive operation exceeds its budget and no
/// sampling fallback applies (e.g. tabulation).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-owning handle over either rule representation.
class RuleView {
 public:
  RuleView(const MedianRule& rule) : rule_(&rule) {}         // NOLINT
  RuleView(const CoalitionRule& rule) : rule_(&rule) {}      // NOLINT

  const AlternativeSpace& space() const;
  const AgentPartition& agents() const;
  int eval(const Profile& profile) const;
  bool is_median() const { return std::holds_alternative<const MedianRule*>(rule_); }

 private:
  std::variant<const MedianRule*, const CoalitionRule*> rule_;
};

enum class WitnessKind {
  Manipulation,
  GroupManipulation,
  AnonymityViolation,
  EquivalenceCounterexample,
};

/// Replayable evidence. `profile` is the truthful / original profile and
/// `altered` the deviation: a misreport by `agents` (with their true
/// rankings alongside), a within-type transposition of two agents, or the
/// same profile evaluated under a second rule.
struct Witness {
  WitnessKind kind = WitnessKind::Manipulation;
  Profile profile;
  Profile altered;
  std::vector<int> agents;          // deviators, or the transposed pair
  std::vector<Ranking> rankings;    // true preferences of the deviators
  int outcome_before = -1;          // truthful / first-rule outcome
  int outcome_after = -1;           // deviation / second-rule outcome
};

/// Recomputes both outcomes and the improvement condition. Equivalence
/// witnesses need the second rule.
bool replay_witness(const RuleView& rule, const Witness& witness);
bool replay_equivalence_witness(const RuleView& first, const RuleView& second,
                                const Witness& witness);

/// Search limits. Searches run exhaustively while the deviation space fits
/// max_exhaustive; beyond that they draw `samples` seeded samples and report
/// partial coverage. PRNG contract: std::mt19937_64 seeded directly with
/// `seed`; every draw is engine() % bound, consumed in the documented order
/// of each search.
struct AuditBudget {
  std::uint64_t max_exhaustive = 4'000'000;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  int gsp_coalition_cap = 4;  // max deviating-coalition size
  int jobs = 1;
};

/// Search result: a witness or, when none was found, whether coverage was
/// exhaustive and how many candidate deviations were examined.
struct AuditOutcome {
  std::optional<Witness> witness;
  bool exhaustive = false;
  std::uint64_t examined = 0;
};

/// Number of profiles (m^n), saturating at the uint64 maximum.
std::uint64_t profile_space_size(const AlternativeSpace& space,
                                 const AgentPartition& agents);

/// Outcomes for every profile, indexed by lexicographic profile rank (peaks
/// before dips, agent 0 most significant, last agent fastest).
std::vector<int> tabulate(const RuleView& rule, std::uint64_t max_entries,
                          int jobs = 1);

Profile profile_from_rank(std::uint64_t rank, int m, const AgentPartition& agents);
std::uint64_t profile_rank(const Profile& profile, int m);

/// First profitable unilateral misreport, scanning deviators in agent
/// order, then the other agents' reports lexicographically, then the
/// deviator's true ranking in enumeration order, then the misreported
/// location in ascending order. Sampled mode draws (deviator, others,
/// ranking, misreport) per sample in that order.
AuditOutcome find_manipulation(const RuleView& rule, const AuditBudget& budget = {});

/// First joint deviation that strictly improves every member of some
/// coalition (size capped by budget.gsp_coalition_cap). Coalitions are
/// scanned by ascending bitmask, then others lexicographically, then joint
/// true rankings, then joint misreports (member-major, last member fastest).
AuditOutcome find_group_manipulation(const RuleView& rule,
                                     const AuditBudget& budget = {});

/// First outcome change under a transposition of two same-type agents'
/// reports. Profiles are scanned lexicographically; for each profile the
/// transpositions run through all peaked index pairs (i<j) and then all
/// dipped index pairs.
AuditOutcome check_type_anonymity(const RuleView& rule, const AuditBudget& budget = {});

/// First profile where the two rules disagree. Both must share the space
/// and partition (std::invalid_argument otherwise).
AuditOutcome check_equivalence(const RuleView& first, const RuleView& second,
                               const AuditBudget& budget = {});

/// Seeded generators for structurally valid rules; used by the audit
/// property suites. Throw std::invalid_argument for partitions with no
/// agents or with no peaked agents over more than two alternatives (no
/// valid rule exists there).
MedianRule random_median_rule(const AlternativeSpace& space,
                              const AgentPartition& agents, std::uint64_t seed);
CoalitionRule random_coalition_rule(const AlternativeSpace& space,
                                    const AgentPartition& agents, std::uint64_t seed);

}  // namespace facloc
