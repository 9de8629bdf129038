#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "facloc/domain.hpp"
#include "facloc/validation.hpp"

namespace facloc {

/// Coalitions are bitmasks. Left-coalition entries use bits over the peaked
/// block only (bit i = peaked agent i); decisive entries use bits over the
/// whole society (peaked block first, then dipped).
using CoalitionMask = std::uint32_t;

/// Winning coalitions of peaked agents for one range element.
///
/// The family is upward closed by construction: in general form it is stored
/// as the antichain of its minimal coalitions and membership means containing
/// one of them; in type-anonymous form a single size threshold is stored
/// (threshold 0 admits the empty coalition, threshold a+1 encodes the empty
/// family).
struct LcsEntry {
  ExtElem element = ExtElem::single(0);
  int threshold = 0;                   // type-anonymous form
  std::vector<CoalitionMask> minimal;  // general form, sorted ascending
};

/// Left coalition system: the first-step range (`entries` ascending by
/// element) together with the winning-coalition family of each element.
struct LeftCoalitionSystem {
  bool type_anonymous = true;
  std::vector<LcsEntry> entries;
};

/// Count pair in a decisive family: at least `peaked` peaked supporters and
/// at least `dipped` dipped supporters.
struct CountPair {
  int peaked = 0;
  int dipped = 0;
  friend bool operator==(const CountPair&, const CountPair&) = default;
};

/// Decisive coalitions for one contiguous pair: supporters of the left
/// endpoint win exactly when they contain a decisive coalition (general
/// form) or dominate some count pair (type-anonymous form).
struct DecisiveEntry {
  ExtElem pair = ExtElem::pair(0);
  std::vector<CountPair> counts;       // type-anonymous form
  std::vector<CoalitionMask> minimal;  // general form, bits over the society
};

/// Coalition representation: scan the range left to right and stop at the
/// first element whose left-supporter coalition wins; pairs are then
/// resolved by their decisive family.
struct CoalitionRule {
  AlternativeSpace space;
  AgentPartition agents;
  LeftCoalitionSystem lcs;
  std::vector<DecisiveEntry> decisive;  // sorted ascending by pair
};

/// Range elements, ascending (the entries' elements).
std::vector<ExtElem> omega_range(const CoalitionRule& rule);

/// First step: smallest range element whose supporters (peaks at or left of
/// it) form a winning coalition. Throws std::runtime_error when no element
/// wins (malformed system).
ExtElem omega_eval(const CoalitionRule& rule, const std::vector<int>& peaks);

/// Second step vote on a pair.
Side g_eval(const CoalitionRule& rule, const Profile& profile, ExtElem pair);

/// Full evaluation; mirrors eval_median_rule's error behavior.
int eval_coalition_rule(const CoalitionRule& rule, const Profile& profile);

const LcsEntry* find_lcs_entry(const CoalitionRule& rule, ExtElem element);
const DecisiveEntry* find_decisive_entry(const CoalitionRule& rule, ExtElem pair);

/// Membership tests against the stored form.
bool lcs_member(const LeftCoalitionSystem& lcs, const LcsEntry& entry,
                CoalitionMask coalition);
bool decisive_member(const CoalitionRule& rule, const DecisiveEntry& entry,
                     CoalitionMask supporters);

/// Minimal coalitions in L(pair) \ L(x) where x is the pair's left endpoint
/// (an empty family is used when x is outside the range). These are the
/// peaked coalitions that first become winning at the pair, which the
/// decisive family has to cover. Requires agents.peaked <= 20; throws
/// std::length_error beyond that.
std::vector<CoalitionMask> minimal_coalitions_of_difference(const CoalitionRule& rule,
                                                            ExtElem pair);

/// Structural validation. Violation codes (README has the full table):
///   RANGE_I    neither the least alternative nor the least pair is in range
///   RANGE_II   neither the greatest alternative nor the greatest pair is
///   RANGE_III  an interior alternative is missing from the range
///   LCS_ORDER  entries out of order or duplicated
///   DEF4_II    families not nested along the range (thresholds increasing)
///   DEF4_IV    empty-coalition placement wrong when the greatest
///              alternative is outside the range
///   DEF4_WD    the full peaked society does not win at the last element
///   WSET_KEYS  decisive entries keyed by anything other than range pairs
///   DEF6_I     a decisive coalition or count without dipped support
///   DEF6_II    minimal newly-winning peaked coalitions not all covered
///   DEF6_III   decisive family is not an antichain
/// Warnings: UNREACHABLE (range element never selected; checked exhaustively
/// when m^a fits the budget, otherwise REACH_SKIPPED is emitted).
ValidationReport validate_coalition_rule(const CoalitionRule& rule);

/// Closure gaps that keep a general-form rule from being type-anonymous:
/// DEF4_V for a family that is not closed under coalition size, DEF6_IV for
/// a decisive family not closed under type counts. Empty result means the
/// rule is expressible in type-anonymous form.
std::vector<Violation> type_anonymity_gaps(const CoalitionRule& rule);

/// Threshold/count-pair form of a rule whose families are all closed
/// (lossless); nullopt when type_anonymity_gaps is nonempty.
std::optional<CoalitionRule> to_type_anonymous(const CoalitionRule& rule);

/// Explicit-antichain form (always possible, lossless).
CoalitionRule to_general_form(const CoalitionRule& rule);

}  // namespace facloc
