#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facloc/coalition_rule.hpp"
#include "facloc/median_rule.hpp"

namespace facloc {

/// Thrown when a conversion target cannot express the source rule
/// (currently: coalition rules that are not type-anonymous).
class InexpressibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConversionOptions {
  std::uint64_t max_exhaustive = 1'000'000;  // full profile sweep up to here
  std::uint64_t samples = 100'000;           // seeded sample size beyond it
  std::uint64_t seed = 0;
  int jobs = 1;
};

enum class EqualityStatus { NotChecked, Equal, Unequal };

/// What a conversion did and whether the two rules agree pointwise.
struct ConversionReport {
  std::string source;
  std::string target;
  std::vector<std::string> trace;  // human-readable construction log
  EqualityStatus equality = EqualityStatus::NotChecked;
  bool exhaustive = false;
  std::uint64_t profiles_compared = 0;
  std::optional<Profile> counterexample;  // set when equality == Unequal
  int outcome_source = -1;
  int outcome_target = -1;
  ValidationReport target_validation;
};

/// Left coalition system induced by a phantom vector: the range is the
/// median range; each non-final element gets threshold a+1 minus the
/// phantoms at or left of it; the final element admits every coalition
/// (including the empty one when it is a pair, or when there are no peaked
/// agents at all).
LeftCoalitionSystem phantoms_to_lcs(const MedianRule& rule);

/// Phantom vector recovered from a type-anonymous system: a+1 minus the
/// first threshold at the range minimum, a+1 minus threshold minus already
/// placed at every interior threshold drop, remainder at the range maximum.
/// Requires lcs.type_anonymous.
std::vector<ExtElem> lcs_to_phantoms(const CoalitionRule& rule);

/// The quota antichain and the count-pair antichain are the same data.
DecisiveEntry quotas_to_decisive(const QuotaSet& quota_set);
QuotaSet decisive_to_quotas(const DecisiveEntry& entry);

/// Representation changes without the behavioral comparison.
CoalitionRule median_to_coalition(const MedianRule& rule,
                                  std::vector<std::string>* trace = nullptr);
/// Throws InexpressibleError when the rule is not type-anonymous.
MedianRule coalition_to_median(const CoalitionRule& rule,
                               std::vector<std::string>* trace = nullptr);

/// Conversion plus target validation plus pointwise comparison (exhaustive
/// when the profile space fits options.max_exhaustive, seeded sampling
/// otherwise).
std::pair<CoalitionRule, ConversionReport> convert_to_coalition(
    const MedianRule& rule, const ConversionOptions& options = {});
std::pair<MedianRule, ConversionReport> convert_to_median(
    const CoalitionRule& rule, const ConversionOptions& options = {});

}  // namespace facloc
