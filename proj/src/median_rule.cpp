#include "facloc/median_rule.hpp"

#include <algorithm>
#include <stdexcept>

namespace facloc {

PhantomCounts count_phantoms_at(const MedianRule& rule, ExtElem at) {
  PhantomCounts counts;
  for (ExtElem g : rule.phantoms) {
    if (g == at) ++counts.at;
    if (g <= at) ++counts.at_or_left;
  }
  return counts;
}

ExtElem mixed_median(const MedianRule& rule, const std::vector<int>& peaks) {
  std::vector<int> keys;
  keys.reserve(peaks.size() + rule.phantoms.size());
  for (int p : peaks) keys.push_back(ExtElem::single(p).key());
  for (ExtElem g : rule.phantoms) keys.push_back(g.key());
  auto mid = keys.begin() + static_cast<std::ptrdiff_t>(peaks.size());
  std::nth_element(keys.begin(), mid, keys.end());
  return ExtElem::from_key(*mid);
}

PairCounts second_step_counts(const MedianRule& rule, const Profile& profile,
                              ExtElem pair) {
  (void)rule;
  PairCounts counts;
  for (int p : profile.peaks)
    if (pair_preference(PrefType::Peaked, p, pair) == Side::Left) ++counts.peaked;
  for (int d : profile.dips)
    if (pair_preference(PrefType::Dipped, d, pair) == Side::Left) ++counts.dipped;
  return counts;
}

Side quota_decide(const QuotaSet& quota_set, PairCounts counts) {
  for (const DoubleQuota& q : quota_set.quotas)
    if (counts.peaked >= q.peaked && counts.dipped >= q.dipped) return Side::Left;
  return Side::Right;
}

int eval_median_rule(const MedianRule& rule, const Profile& profile) {
  validate_profile(rule.space, rule.agents, profile);
  ExtElem med = mixed_median(rule, profile.peaks);
  if (med.is_single()) return med.index();
  const QuotaSet* qs = find_quota_set(rule, med);
  if (qs == nullptr)
    throw std::runtime_error("median fell on pair " + rule.space.describe(med) +
                             " which has no quota set");
  Side side = quota_decide(*qs, second_step_counts(rule, profile, med));
  return side == Side::Left ? med.left() : med.right();
}

std::vector<ExtElem> median_range(const MedianRule& rule) {
  std::vector<ExtElem> out;
  for (int i = 1; i + 1 < rule.space.size(); ++i) out.push_back(ExtElem::single(i));
  out.insert(out.end(), rule.phantoms.begin(), rule.phantoms.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const QuotaSet* find_quota_set(const MedianRule& rule, ExtElem pair) {
  for (const QuotaSet& qs : rule.quota_sets)
    if (qs.pair == pair) return &qs;
  return nullptr;
}

namespace {

bool quota_antichain(const std::vector<DoubleQuota>& quotas) {
  for (std::size_t i = 0; i < quotas.size(); ++i)
    for (std::size_t j = i + 1; j < quotas.size(); ++j) {
      const DoubleQuota& p = quotas[i];
      const DoubleQuota& q = quotas[j];
      bool p_below = p.peaked <= q.peaked && p.dipped <= q.dipped;
      bool q_below = q.peaked <= p.peaked && q.dipped <= p.dipped;
      if (p_below || q_below) return false;
    }
  return true;
}

}  // namespace

ValidationReport validate_median_rule(const MedianRule& rule) {
  ValidationReport report;
  const AlternativeSpace& space = rule.space;
  const int a = rule.agents.peaked;
  const int d = rule.agents.dipped;
  auto fail = [&report](const std::string& code, const std::string& detail) {
    report.violations.push_back({code, detail});
  };

  report.checked = {"PHANTOM_COUNT", "DEF1_I", "DEF1_II", "DEF1_D0",
                    "QSET_KEYS",     "DEF2_I", "DEF2_II", "DEF2_III", "DEF2_LMAX"};

  if (static_cast<int>(rule.phantoms.size()) != a + 1)
    fail("PHANTOM_COUNT", "expected " + std::to_string(a + 1) + " phantoms, found " +
                              std::to_string(rule.phantoms.size()));
  if (!std::is_sorted(rule.phantoms.begin(), rule.phantoms.end()))
    fail("PHANTOM_COUNT", "phantoms are not sorted");
  if (rule.phantoms.empty()) return report;

  ExtElem lowest = rule.phantoms.front();
  bool low_ok = lowest == space.min_single() ||
                (space.has_pairs() && lowest == space.min_pair());
  if (!low_ok)
    fail("DEF1_I", "smallest phantom is " + space.describe(lowest));
  ExtElem highest = rule.phantoms.back();
  bool high_ok = highest == space.max_single() ||
                 (space.has_pairs() && highest == space.max_pair());
  if (!high_ok)
    fail("DEF1_II", "largest phantom is " + space.describe(highest));
  if (d == 0)
    for (ExtElem g : rule.phantoms)
      if (g.is_pair()) {
        fail("DEF1_D0", "no dipped agents but phantom " + space.describe(g) + " is a pair");
        break;
      }

  // Quota sets must be keyed by exactly the pairs of the median range.
  std::vector<ExtElem> range_pairs;
  for (ExtElem e : median_range(rule))
    if (e.is_pair()) range_pairs.push_back(e);
  std::vector<ExtElem> keys;
  for (const QuotaSet& qs : rule.quota_sets) keys.push_back(qs.pair);
  for (ExtElem e : range_pairs)
    if (std::find(keys.begin(), keys.end(), e) == keys.end())
      fail("QSET_KEYS", "no quota set for range pair " + space.describe(e));
  for (ExtElem e : keys)
    if (std::find(range_pairs.begin(), range_pairs.end(), e) == range_pairs.end())
      fail("QSET_KEYS", "quota set for " + space.describe(e) + " which is not a range pair");

  for (const QuotaSet& qs : rule.quota_sets) {
    const std::string where = " at pair " + space.describe(qs.pair);
    for (const DoubleQuota& q : qs.quotas)
      if (q.peaked < 0 || q.peaked > a || q.dipped < 1 || q.dipped > d)
        fail("DEF2_I", "quota (" + std::to_string(q.peaked) + "," +
                           std::to_string(q.dipped) + ") out of bounds" + where);
    if (!quota_antichain(qs.quotas)) fail("DEF2_II", "quotas are not an antichain" + where);

    PhantomCounts pc = count_phantoms_at(rule, qs.pair);
    int mandatory = a + 1 - pc.at_or_left;
    bool found = false;
    for (const DoubleQuota& q : qs.quotas) found = found || q.peaked == mandatory;
    if (!found)
      fail("DEF2_III",
           "no quota with peaked component " + std::to_string(mandatory) + where);
    if (static_cast<int>(qs.quotas.size()) > pc.at)
      fail("DEF2_LMAX", std::to_string(qs.quotas.size()) + " quotas but only " +
                            std::to_string(pc.at) + " phantoms" + where);
  }
  return report;
}

}  // namespace facloc
