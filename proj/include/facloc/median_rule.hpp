#pragma once

#include <vector>

#include "facloc/domain.hpp"
#include "facloc/validation.hpp"

namespace facloc {

/// Support thresholds a coalition of pair supporters must reach: at least
/// `peaked` peaked agents and at least `dipped` dipped agents.
struct DoubleQuota {
  int peaked = 0;
  int dipped = 0;
  friend bool operator==(const DoubleQuota&, const DoubleQuota&) = default;
};

/// Supporter counts for the left endpoint of a pair, by agent type.
struct PairCounts {
  int peaked = 0;
  int dipped = 0;
};

/// Quotas attached to one contiguous pair. The rule picks the left endpoint
/// exactly when the supporter counts dominate some quota componentwise.
struct QuotaSet {
  ExtElem pair = ExtElem::pair(0);
  std::vector<DoubleQuota> quotas;
};

/// Median representation: the first step takes the middle element of the
/// peaks pooled with a fixed multiset of `peaked + 1` phantom values drawn
/// from the extended order; when that lands on a pair, the quota set for the
/// pair resolves it to one endpoint.
struct MedianRule {
  AlternativeSpace space;
  AgentPartition agents;
  std::vector<ExtElem> phantoms;     // sorted ascending, size agents.peaked + 1
  std::vector<QuotaSet> quota_sets;  // sorted ascending by pair
};

/// Phantom multiplicities at an element: `at` counts phantoms equal to it,
/// `at_or_left` counts phantoms at or before it in the extended order.
struct PhantomCounts {
  int at = 0;
  int at_or_left = 0;
};

PhantomCounts count_phantoms_at(const MedianRule& rule, ExtElem at);

/// Middle element (by extended order) of the 2a+1 values: a peaks plus a+1
/// phantoms. Always well defined because the count is odd.
ExtElem mixed_median(const MedianRule& rule, const std::vector<int>& peaks);

/// Supporter counts for the left endpoint of `pair` under `profile`.
PairCounts second_step_counts(const MedianRule& rule, const Profile& profile,
                              ExtElem pair);

/// Left when the counts dominate some quota, Right otherwise.
Side quota_decide(const QuotaSet& quota_set, PairCounts counts);

/// Full two-step evaluation; returns the chosen alternative index.
/// Throws std::invalid_argument on dimension mismatch and std::runtime_error
/// when the median lands on a pair with no quota set (malformed rule).
int eval_median_rule(const MedianRule& rule, const Profile& profile);

/// First-step range: interior alternatives plus every phantom value,
/// deduplicated and ascending.
std::vector<ExtElem> median_range(const MedianRule& rule);

const QuotaSet* find_quota_set(const MedianRule& rule, ExtElem pair);

/// Structural validation. Violation codes (README has the full table):
///   PHANTOM_COUNT  phantom multiset has size != peaked + 1
///   DEF1_I         smallest phantom is not the least alternative or least pair
///   DEF1_II        largest phantom is not the greatest alternative or pair
///   DEF1_D0        dipped = 0 but some phantom is a pair
///   QSET_KEYS      quota sets keyed by anything other than the range pairs
///   DEF2_I         quota outside 0 <= peaked <= a, 1 <= dipped <= d
///   DEF2_II        quotas within a set are not an antichain
///   DEF2_III       no quota with the minimal peaked component (a+1 minus
///                  phantoms at or left of the pair)
///   DEF2_LMAX      more quotas than phantoms at the pair
ValidationReport validate_median_rule(const MedianRule& rule);

}  // namespace facloc
