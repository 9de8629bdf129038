#include "facloc/transform.hpp"

#include <algorithm>
#include <random>

#include "facloc/audit.hpp"

namespace facloc {

LeftCoalitionSystem phantoms_to_lcs(const MedianRule& rule) {
  const int a = rule.agents.peaked;
  LeftCoalitionSystem lcs;
  lcs.type_anonymous = true;
  std::vector<ExtElem> range = median_range(rule);
  for (std::size_t i = 0; i < range.size(); ++i) {
    LcsEntry entry;
    entry.element = range[i];
    if (i + 1 < range.size()) {
      entry.threshold = a + 1 - count_phantoms_at(rule, range[i]).at_or_left;
    } else {
      // The final element admits everything; the empty coalition is only
      // needed when no peaked agent can support it (pairs above the top
      // alternative, or an empty peaked side).
      entry.threshold = (range[i].is_pair() || a == 0) ? 0 : 1;
    }
    lcs.entries.push_back(entry);
  }
  return lcs;
}

std::vector<ExtElem> lcs_to_phantoms(const CoalitionRule& rule) {
  if (!rule.lcs.type_anonymous)
    throw InexpressibleError("phantom recovery needs a type-anonymous system");
  const int a = rule.agents.peaked;
  const auto& entries = rule.lcs.entries;
  std::vector<ExtElem> phantoms;
  int placed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    int want = 0;
    if (i + 1 == entries.size()) {
      want = a + 1 - placed;
    } else if (i == 0) {
      want = a + 1 - entries[i].threshold;
    } else if (entries[i].threshold != entries[i - 1].threshold) {
      want = a + 1 - entries[i].threshold - placed;
    }
    want = std::clamp(want, 0, a + 1 - placed);
    for (int k = 0; k < want; ++k) phantoms.push_back(entries[i].element);
    placed += want;
  }
  return phantoms;
}

DecisiveEntry quotas_to_decisive(const QuotaSet& quota_set) {
  DecisiveEntry entry;
  entry.pair = quota_set.pair;
  for (const DoubleQuota& q : quota_set.quotas)
    entry.counts.push_back(CountPair{q.peaked, q.dipped});
  return entry;
}

QuotaSet decisive_to_quotas(const DecisiveEntry& entry) {
  QuotaSet qs;
  qs.pair = entry.pair;
  for (const CountPair& c : entry.counts)
    qs.quotas.push_back(DoubleQuota{c.peaked, c.dipped});
  return qs;
}

CoalitionRule median_to_coalition(const MedianRule& rule,
                                  std::vector<std::string>* trace) {
  CoalitionRule out{rule.space, rule.agents, phantoms_to_lcs(rule), {}};
  for (const LcsEntry& e : out.lcs.entries) {
    if (trace != nullptr)
      trace->push_back("threshold " + std::to_string(e.threshold) + " at " +
                       rule.space.describe(e.element));
    if (e.element.is_pair()) {
      const QuotaSet* qs = find_quota_set(rule, e.element);
      if (qs != nullptr) out.decisive.push_back(quotas_to_decisive(*qs));
    }
  }
  return out;
}

MedianRule coalition_to_median(const CoalitionRule& rule,
                               std::vector<std::string>* trace) {
  std::optional<CoalitionRule> anon = to_type_anonymous(rule);
  if (!anon.has_value())
    throw InexpressibleError(
        "rule is not type-anonymous; no median representation exists");
  MedianRule out{rule.space, rule.agents, lcs_to_phantoms(*anon), {}};
  if (trace != nullptr)
    for (ExtElem g : out.phantoms)
      trace->push_back("phantom at " + rule.space.describe(g));
  // Quota sets only for pairs the median can actually reach; a pair of the
  // source range with no phantom mass is unreachable on the median side.
  for (const DecisiveEntry& w : anon->decisive) {
    bool reachable = std::find(out.phantoms.begin(), out.phantoms.end(), w.pair) !=
                     out.phantoms.end();
    if (reachable)
      out.quota_sets.push_back(decisive_to_quotas(w));
    else if (trace != nullptr)
      trace->push_back("pair " + rule.space.describe(w.pair) +
                       " unreachable by the median; decisive family dropped");
  }
  return out;
}

namespace {

void compare_behavior(const RuleView& source, const RuleView& target,
                      const ConversionOptions& options, ConversionReport* report) {
  const AlternativeSpace& space = source.space();
  const AgentPartition& agents = source.agents();
  const int m = space.size();
  std::uint64_t total = 1;
  bool too_big = false;
  for (int i = 0; i < agents.total() && !too_big; ++i) {
    total *= static_cast<std::uint64_t>(m);
    too_big = total > options.max_exhaustive;
  }
  if (!too_big) {
    report->exhaustive = true;
    report->profiles_compared = total;
    std::vector<int> lhs = tabulate(source, options.max_exhaustive, options.jobs);
    std::vector<int> rhs = tabulate(target, options.max_exhaustive, options.jobs);
    for (std::uint64_t r = 0; r < total; ++r)
      if (lhs[r] != rhs[r]) {
        report->equality = EqualityStatus::Unequal;
        report->counterexample = profile_from_rank(r, m, agents);
        report->outcome_source = lhs[r];
        report->outcome_target = rhs[r];
        return;
      }
    report->equality = EqualityStatus::Equal;
    return;
  }
  report->exhaustive = false;
  report->profiles_compared = options.samples;
  std::mt19937_64 engine(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    Profile p;
    for (int i = 0; i < agents.peaked; ++i)
      p.peaks.push_back(static_cast<int>(engine() % m));
    for (int i = 0; i < agents.dipped; ++i)
      p.dips.push_back(static_cast<int>(engine() % m));
    int lhs = source.eval(p);
    int rhs = target.eval(p);
    if (lhs != rhs) {
      report->equality = EqualityStatus::Unequal;
      report->counterexample = p;
      report->outcome_source = lhs;
      report->outcome_target = rhs;
      return;
    }
  }
  report->equality = EqualityStatus::Equal;
}

}  // namespace

std::pair<CoalitionRule, ConversionReport> convert_to_coalition(
    const MedianRule& rule, const ConversionOptions& options) {
  ConversionReport report;
  report.source = "median";
  report.target = "coalition";
  CoalitionRule out = median_to_coalition(rule, &report.trace);
  report.target_validation = validate_coalition_rule(out);
  compare_behavior(RuleView(rule), RuleView(out), options, &report);
  return {std::move(out), std::move(report)};
}

std::pair<MedianRule, ConversionReport> convert_to_median(
    const CoalitionRule& rule, const ConversionOptions& options) {
  ConversionReport report;
  report.source = "coalition";
  report.target = "median";
  MedianRule out = coalition_to_median(rule, &report.trace);
  report.target_validation = validate_median_rule(out);
  compare_behavior(RuleView(rule), RuleView(out), options, &report);
  return {std::move(out), std::move(report)};
}

}  // namespace facloc
