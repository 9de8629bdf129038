#include "facloc/coalition_rule.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace facloc {

namespace {

constexpr int kEnumGuardBits = 20;
constexpr std::uint64_t kReachBudget = 1'000'000;

CoalitionMask full_mask(int bits) {
  return bits >= 32 ? ~CoalitionMask{0} : (CoalitionMask{1} << bits) - 1;
}

std::string mask_str(CoalitionMask mask) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1u) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
  return out + "}";
}

/// Supporters of element e among the peaks: agents whose peak lies at or
/// left of it. Key comparison does both the single and the pair case.
CoalitionMask support_mask(const std::vector<int>& peaks, ExtElem e) {
  CoalitionMask mask = 0;
  for (std::size_t i = 0; i < peaks.size(); ++i)
    if (2 * peaks[i] <= e.key()) mask |= CoalitionMask{1} << i;
  return mask;
}

bool antichain(const std::vector<CoalitionMask>& masks) {
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j) {
      CoalitionMask meet = masks[i] & masks[j];
      if (meet == masks[i] || meet == masks[j]) return false;
    }
  return true;
}

bool count_antichain(const std::vector<CountPair>& counts) {
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = i + 1; j < counts.size(); ++j) {
      const CountPair& p = counts[i];
      const CountPair& q = counts[j];
      if ((p.peaked <= q.peaked && p.dipped <= q.dipped) ||
          (q.peaked <= p.peaked && q.dipped <= p.dipped))
        return false;
    }
  return true;
}

}  // namespace

std::vector<ExtElem> omega_range(const CoalitionRule& rule) {
  std::vector<ExtElem> out;
  out.reserve(rule.lcs.entries.size());
  for (const LcsEntry& e : rule.lcs.entries) out.push_back(e.element);
  return out;
}

bool lcs_member(const LeftCoalitionSystem& lcs, const LcsEntry& entry,
                CoalitionMask coalition) {
  if (lcs.type_anonymous)
    return std::popcount(coalition) >= entry.threshold;
  for (CoalitionMask c : entry.minimal)
    if ((coalition & c) == c) return true;
  return false;
}

ExtElem omega_eval(const CoalitionRule& rule, const std::vector<int>& peaks) {
  for (const LcsEntry& e : rule.lcs.entries)
    if (lcs_member(rule.lcs, e, support_mask(peaks, e.element))) return e.element;
  throw std::runtime_error("left coalition system admits no element for this profile");
}

bool decisive_member(const CoalitionRule& rule, const DecisiveEntry& entry,
                     CoalitionMask supporters) {
  if (rule.lcs.type_anonymous) {
    int peaked = std::popcount(supporters & full_mask(rule.agents.peaked));
    int dipped = std::popcount(supporters) - peaked;
    for (const CountPair& c : entry.counts)
      if (peaked >= c.peaked && dipped >= c.dipped) return true;
    return false;
  }
  for (CoalitionMask c : entry.minimal)
    if ((supporters & c) == c) return true;
  return false;
}

Side g_eval(const CoalitionRule& rule, const Profile& profile, ExtElem pair) {
  const DecisiveEntry* entry = find_decisive_entry(rule, pair);
  if (entry == nullptr)
    throw std::runtime_error("pair " + rule.space.describe(pair) +
                             " has no decisive family");
  CoalitionMask supporters = 0;
  for (std::size_t i = 0; i < profile.peaks.size(); ++i)
    if (pair_preference(PrefType::Peaked, profile.peaks[i], pair) == Side::Left)
      supporters |= CoalitionMask{1} << i;
  for (std::size_t j = 0; j < profile.dips.size(); ++j)
    if (pair_preference(PrefType::Dipped, profile.dips[j], pair) == Side::Left)
      supporters |= CoalitionMask{1} << (rule.agents.peaked + j);
  return decisive_member(rule, *entry, supporters) ? Side::Left : Side::Right;
}

int eval_coalition_rule(const CoalitionRule& rule, const Profile& profile) {
  validate_profile(rule.space, rule.agents, profile);
  ExtElem chosen = omega_eval(rule, profile.peaks);
  if (chosen.is_single()) return chosen.index();
  return g_eval(rule, profile, chosen) == Side::Left ? chosen.left() : chosen.right();
}

const LcsEntry* find_lcs_entry(const CoalitionRule& rule, ExtElem element) {
  for (const LcsEntry& e : rule.lcs.entries)
    if (e.element == element) return &e;
  return nullptr;
}

const DecisiveEntry* find_decisive_entry(const CoalitionRule& rule, ExtElem pair) {
  for (const DecisiveEntry& e : rule.decisive)
    if (e.pair == pair) return &e;
  return nullptr;
}

std::vector<CoalitionMask> minimal_coalitions_of_difference(const CoalitionRule& rule,
                                                            ExtElem pair) {
  const int a = rule.agents.peaked;
  if (a > kEnumGuardBits)
    throw std::length_error("peaked-coalition enumeration capped at 20 agents");
  const LcsEntry* at_pair = find_lcs_entry(rule, pair);
  if (at_pair == nullptr)
    throw std::invalid_argument("pair is not in the range");
  const LcsEntry* at_left = find_lcs_entry(rule, ExtElem::single(pair.left()));

  const CoalitionMask limit = full_mask(a);
  std::vector<bool> in_diff(static_cast<std::size_t>(limit) + 1, false);
  for (CoalitionMask s = 0;; ++s) {
    bool now = lcs_member(rule.lcs, *at_pair, s) &&
               (at_left == nullptr || !lcs_member(rule.lcs, *at_left, s));
    in_diff[s] = now;
    if (s == limit) break;
  }
  // The difference of two upward-closed families is convex, so dropping a
  // single member is enough to test minimality.
  std::vector<CoalitionMask> minimal;
  for (CoalitionMask s = 0;; ++s) {
    if (in_diff[s]) {
      bool is_min = true;
      for (int i = 0; i < a && is_min; ++i)
        if (s >> i & 1u) is_min = !in_diff[s & ~(CoalitionMask{1} << i)];
      if (is_min) minimal.push_back(s);
    }
    if (s == limit) break;
  }
  return minimal;
}

namespace {

/// Smallest coalition size admitted by an entry; a+1 encodes an empty family.
int min_support_size(const LeftCoalitionSystem& lcs, const LcsEntry& entry, int a) {
  if (lcs.type_anonymous) return entry.threshold;
  if (entry.minimal.empty()) return a + 1;
  int best = a + 1;
  for (CoalitionMask c : entry.minimal) best = std::min(best, std::popcount(c));
  return best;
}

bool entry_subset_of(const LeftCoalitionSystem& lcs, const LcsEntry& smaller,
                     const LcsEntry& larger) {
  if (lcs.type_anonymous) return smaller.threshold >= larger.threshold;
  for (CoalitionMask c : smaller.minimal)
    if (!lcs_member(lcs, larger, c)) return false;
  return true;
}

bool entry_has_empty(const LeftCoalitionSystem& lcs, const LcsEntry& entry) {
  return lcs_member(lcs, entry, 0);
}

}  // namespace

ValidationReport validate_coalition_rule(const CoalitionRule& rule) {
  ValidationReport report;
  const AlternativeSpace& space = rule.space;
  const int a = rule.agents.peaked;
  const int d = rule.agents.dipped;
  const int n = rule.agents.total();
  auto fail = [&report](const std::string& code, const std::string& detail) {
    report.violations.push_back({code, detail});
  };

  report.checked = {"RANGE_I",  "RANGE_II", "RANGE_III", "LCS_ORDER", "DEF4_I",
                    "DEF4_II",  "DEF4_III", "DEF4_IV",   "DEF4_WD",   "WSET_KEYS",
                    "DEF6_I",   "DEF6_II",  "DEF6_III"};
  // DEF4_I (upward closure) holds by construction for both stored forms and
  // DEF4_III is vacuous on a finite space; they are listed so reports show
  // every condition.

  const auto& entries = rule.lcs.entries;
  if (entries.empty()) {
    fail("RANGE_I", "range is empty");
    return report;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!space.valid_elem(entries[i].element))
      fail("LCS_ORDER", "entry element outside the extended order");
    if (i > 0 && !(entries[i - 1].element < entries[i].element))
      fail("LCS_ORDER", "entries out of order or duplicated");
  }

  auto in_range = [&entries](ExtElem e) {
    for (const LcsEntry& entry : entries)
      if (entry.element == e) return true;
    return false;
  };
  bool max_single_in_range = in_range(space.max_single());
  if (!in_range(space.min_single()) && !(space.has_pairs() && in_range(space.min_pair())))
    fail("RANGE_I", "range reaches neither " + space.describe(space.min_single()) +
                        " nor the pair containing it");
  if (!max_single_in_range && !(space.has_pairs() && in_range(space.max_pair())))
    fail("RANGE_II", "range reaches neither " + space.describe(space.max_single()) +
                         " nor the pair containing it");
  for (int i = 1; i + 1 < space.size(); ++i)
    if (!in_range(ExtElem::single(i)))
      fail("RANGE_III", "interior alternative " + space.point(i).str() + " not in range");

  for (std::size_t i = 0; i + 1 < entries.size(); ++i)
    if (!entry_subset_of(rule.lcs, entries[i], entries[i + 1]))
      fail("DEF4_II", "family at " + space.describe(entries[i].element) +
                          " is not contained in the one at " +
                          space.describe(entries[i + 1].element));

  const LcsEntry& last = entries.back();
  if (!max_single_in_range) {
    if (!entry_has_empty(rule.lcs, last))
      fail("DEF4_IV", "empty coalition missing from the last family although " +
                          space.describe(space.max_single()) + " is outside the range");
    for (std::size_t i = 0; i + 1 < entries.size(); ++i)
      if (entry_has_empty(rule.lcs, entries[i]))
        fail("DEF4_IV", "empty coalition admitted at " +
                            space.describe(entries[i].element) +
                            " before the range maximum");
  }
  if (!lcs_member(rule.lcs, last, full_mask(a)))
    fail("DEF4_WD", "the full peaked society does not win at " +
                        space.describe(last.element));

  // Decisive families keyed by exactly the pairs of the range.
  std::vector<ExtElem> range_pairs;
  for (const LcsEntry& e : entries)
    if (e.element.is_pair()) range_pairs.push_back(e.element);
  for (ExtElem p : range_pairs)
    if (find_decisive_entry(rule, p) == nullptr)
      fail("WSET_KEYS", "no decisive family for range pair " + space.describe(p));
  for (const DecisiveEntry& w : rule.decisive)
    if (std::find(range_pairs.begin(), range_pairs.end(), w.pair) == range_pairs.end())
      fail("WSET_KEYS", "decisive family for " + space.describe(w.pair) +
                            " which is not a range pair");

  const CoalitionMask peaked_mask = full_mask(a);
  for (const DecisiveEntry& w : rule.decisive) {
    const std::string where = " at pair " + space.describe(w.pair);
    if (rule.lcs.type_anonymous) {
      for (const CountPair& c : w.counts)
        if (c.peaked < 0 || c.peaked > a || c.dipped < 1 || c.dipped > d)
          fail("DEF6_I", "count pair (" + std::to_string(c.peaked) + "," +
                             std::to_string(c.dipped) + ") out of bounds" + where);
      if (!count_antichain(w.counts))
        fail("DEF6_III", "count pairs are not an antichain" + where);
    } else {
      if (n > kEnumGuardBits + 12)
        throw std::length_error("decisive validation capped at 32 agents");
      for (CoalitionMask c : w.minimal) {
        if (c & ~full_mask(n)) fail("DEF6_I", "coalition with unknown agents" + where);
        if ((c & ~peaked_mask) == 0)
          fail("DEF6_I", "coalition " + mask_str(c) + " has no dipped agent" + where);
      }
      if (!antichain(w.minimal))
        fail("DEF6_III", "decisive coalitions are not an antichain" + where);
    }

    if (find_lcs_entry(rule, w.pair) == nullptr) continue;  // WSET_KEYS already fired
    if (a <= kEnumGuardBits) {
      for (CoalitionMask b : minimal_coalitions_of_difference(rule, w.pair)) {
        bool covered = false;
        if (rule.lcs.type_anonymous) {
          for (const CountPair& c : w.counts)
            covered = covered || c.peaked == std::popcount(b);
        } else {
          for (CoalitionMask s : w.minimal)
            covered = covered || (s & peaked_mask) == b;
        }
        if (!covered)
          fail("DEF6_II", "newly winning peaked coalition " + mask_str(b) +
                              " has no decisive coalition with that peaked part" + where);
      }
    }
  }

  // Reachability of range elements, exhaustive over peak vectors when small.
  std::uint64_t peak_space = 1;
  bool overflow = false;
  for (int i = 0; i < a && !overflow; ++i) {
    peak_space *= static_cast<std::uint64_t>(space.size());
    overflow = peak_space > kReachBudget;
  }
  if (overflow) {
    report.warnings.push_back({"REACH_SKIPPED", "peak space too large to sweep"});
  } else if (report.violations.empty()) {
    std::vector<bool> hit(entries.size(), false);
    std::vector<int> peaks(a, 0);
    for (std::uint64_t it = 0;; ++it) {
      ExtElem chosen = omega_eval(rule, peaks);
      for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].element == chosen) hit[i] = true;
      int pos = a - 1;
      while (pos >= 0 && peaks[pos] == space.size() - 1) peaks[pos--] = 0;
      if (pos < 0) break;
      ++peaks[pos];
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (!hit[i])
        report.warnings.push_back(
            {"UNREACHABLE", "range element " + space.describe(entries[i].element) +
                                " is never selected"});
  }
  return report;
}

std::vector<Violation> type_anonymity_gaps(const CoalitionRule& rule) {
  std::vector<Violation> gaps;
  if (rule.lcs.type_anonymous) return gaps;
  const int a = rule.agents.peaked;
  const int n = rule.agents.total();
  for (const LcsEntry& e : rule.lcs.entries) {
    if (e.minimal.empty()) continue;
    int size = std::popcount(e.minimal.front());
    bool uniform = true;
    for (CoalitionMask c : e.minimal) uniform = uniform && std::popcount(c) == size;
    std::uint64_t expected = 1;  // C(a, size)
    for (int i = 0; i < size; ++i) expected = expected * (a - i) / (i + 1);
    if (!uniform || e.minimal.size() != expected)
      gaps.push_back({"DEF4_V", "family at " + rule.space.describe(e.element) +
                                    " is not closed under coalition size"});
  }
  for (const DecisiveEntry& w : rule.decisive) {
    // Count closure: grouping the antichain by (peaked, dipped) sizes must
    // exhaust every coalition with those sizes.
    std::vector<CountPair> seen;
    for (CoalitionMask c : w.minimal) {
      int peaked = std::popcount(c & full_mask(a));
      CountPair cp{peaked, std::popcount(c) - peaked};
      if (std::find(seen.begin(), seen.end(), cp) == seen.end()) seen.push_back(cp);
    }
    std::uint64_t expected = 0;
    for (const CountPair& cp : seen) {
      std::uint64_t ways_a = 1, ways_d = 1;
      for (int i = 0; i < cp.peaked; ++i) ways_a = ways_a * (a - i) / (i + 1);
      for (int i = 0; i < cp.dipped; ++i) ways_d = ways_d * (n - a - i) / (i + 1);
      expected += ways_a * ways_d;
    }
    if (w.minimal.size() != expected)
      gaps.push_back({"DEF6_IV", "decisive family at " + rule.space.describe(w.pair) +
                                     " is not closed under type counts"});
  }
  return gaps;
}

std::optional<CoalitionRule> to_type_anonymous(const CoalitionRule& rule) {
  if (rule.lcs.type_anonymous) return rule;
  if (!type_anonymity_gaps(rule).empty()) return std::nullopt;
  CoalitionRule out{rule.space, rule.agents, {}, {}};
  out.lcs.type_anonymous = true;
  const int a = rule.agents.peaked;
  for (const LcsEntry& e : rule.lcs.entries) {
    LcsEntry te;
    te.element = e.element;
    te.threshold = e.minimal.empty() ? a + 1 : std::popcount(e.minimal.front());
    out.lcs.entries.push_back(te);
  }
  for (const DecisiveEntry& w : rule.decisive) {
    DecisiveEntry tw;
    tw.pair = w.pair;
    for (CoalitionMask c : w.minimal) {
      int peaked = std::popcount(c & full_mask(a));
      CountPair cp{peaked, std::popcount(c) - peaked};
      if (std::find(tw.counts.begin(), tw.counts.end(), cp) == tw.counts.end())
        tw.counts.push_back(cp);
    }
    std::sort(tw.counts.begin(), tw.counts.end(),
              [](const CountPair& x, const CountPair& y) {
                return x.peaked != y.peaked ? x.peaked < y.peaked : x.dipped < y.dipped;
              });
    out.decisive.push_back(tw);
  }
  return out;
}

CoalitionRule to_general_form(const CoalitionRule& rule) {
  if (!rule.lcs.type_anonymous) return rule;
  const int a = rule.agents.peaked;
  const int n = rule.agents.total();
  if (n > kEnumGuardBits)
    throw std::length_error("general-form expansion capped at 20 agents");
  CoalitionRule out{rule.space, rule.agents, {}, {}};
  out.lcs.type_anonymous = false;
  for (const LcsEntry& e : rule.lcs.entries) {
    LcsEntry ge;
    ge.element = e.element;
    for (CoalitionMask s = 0; s <= full_mask(a); ++s)
      if (std::popcount(s) == e.threshold) ge.minimal.push_back(s);
    out.lcs.entries.push_back(ge);
  }
  for (const DecisiveEntry& w : rule.decisive) {
    DecisiveEntry gw;
    gw.pair = w.pair;
    for (CoalitionMask s = 0; s <= full_mask(n); ++s) {
      int peaked = std::popcount(s & full_mask(a));
      int dipped = std::popcount(s) - peaked;
      for (const CountPair& c : w.counts)
        if (peaked == c.peaked && dipped == c.dipped) {
          gw.minimal.push_back(s);
          break;
        }
    }
    out.decisive.push_back(gw);
  }
  return out;
}

}  // namespace facloc
