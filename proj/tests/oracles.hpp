// Independent reference implementations used to cross-check the library.
// Everything here favors the most literal possible computation over speed.
#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "facloc/audit.hpp"
#include "facloc/domain.hpp"

namespace oracles {

using namespace facloc;

/// A linear order (most preferred first) is single-peaked on the line iff
/// every prefix of it is a contiguous block of indices.
inline bool prefixes_contiguous(const std::vector<int>& order) {
  int lo = order[0];
  int hi = order[0];
  for (int v : order) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo = order[0];
  hi = order[0];
  for (std::size_t k = 1; k < order.size(); ++k) {
    int v = order[k];
    if (v == lo - 1)
      lo = v;
    else if (v == hi + 1)
      hi = v;
    else
      return false;
  }
  return true;
}

/// All admissible orders of a type, found by filtering every permutation.
inline std::vector<std::vector<int>> permutation_filtered_orders(int m,
                                                                PrefType type) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> candidate = perm;
    if (type == PrefType::Dipped) std::reverse(candidate.begin(), candidate.end());
    if (prefixes_contiguous(candidate)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Plain sorted-middle median over extended-order keys.
inline ExtElem sorted_median(std::vector<ExtElem> values) {
  std::sort(values.begin(), values.end());
  return values[values.size() / 2];
}

/// Classic phantom-voter median over alternatives only: the middle of the
/// peaks pooled with single-valued phantoms. Used for the no-dipped-agents
/// reduction.
inline int moulin_median(const std::vector<int>& peaks,
                         const std::vector<int>& phantom_indices) {
  std::vector<int> pool = peaks;
  pool.insert(pool.end(), phantom_indices.begin(), phantom_indices.end());
  std::sort(pool.begin(), pool.end());
  return pool[pool.size() / 2];
}

/// Two-alternative threshold vote for societies of dipped agents only:
/// the low alternative wins iff at least `quota` dips sit at the high one.
inline int quota_vote(const std::vector<int>& dips, int quota) {
  int supporters = 0;
  for (int d : dips)
    if (d == 1) ++supporters;
  return supporters >= quota ? 0 : 1;
}

struct ManipulationCase {
  Profile truth;
  Profile lie;
  int deviator = -1;
  Ranking ranking;
  int before = -1;
  int after = -1;
};

/// Plain quadruple loop over every (profile, deviator, true ranking,
/// misreport); no index arithmetic shared with the library search.
inline std::optional<ManipulationCase> brute_manipulation(const RuleView& rule) {
  const AlternativeSpace& space = rule.space();
  const AgentPartition agents = rule.agents();
  const int m = space.size();
  const int n = agents.total();
  auto rankings_for = [&](PrefType type) {
    std::vector<Ranking> out;
    for (const auto& order : permutation_filtered_orders(m, type))
      out.push_back(make_ranking(type, order));
    return out;
  };
  const std::vector<Ranking> peaked = rankings_for(PrefType::Peaked);
  const std::vector<Ranking> dipped = rankings_for(PrefType::Dipped);

  std::vector<int> digits(n, 0);
  for (;;) {
    Profile truth;
    truth.peaks.assign(digits.begin(), digits.begin() + agents.peaked);
    truth.dips.assign(digits.begin() + agents.peaked, digits.end());
    for (int dev = 0; dev < n; ++dev) {
      bool is_peaked = dev < agents.peaked;
      for (const Ranking& r : is_peaked ? peaked : dipped) {
        int& slot = is_peaked ? truth.peaks[dev] : truth.dips[dev - agents.peaked];
        int saved = slot;
        slot = r.extremum();
        int before = rule.eval(truth);
        for (int mis = 0; mis < m; ++mis) {
          slot = mis;
          int after = rule.eval(truth);
          slot = r.extremum();
          if (r.prefers(after, before)) {
            ManipulationCase found;
            found.truth = truth;
            found.lie = truth;
            (is_peaked ? found.lie.peaks[dev]
                       : found.lie.dips[dev - agents.peaked]) = mis;
            found.deviator = dev;
            found.ranking = r;
            found.before = before;
            found.after = after;
            return found;
          }
        }
        slot = saved;
      }
    }
    int k = n - 1;
    while (k >= 0 && digits[k] == m - 1) digits[k--] = 0;
    if (k < 0) break;
    ++digits[k];
  }
  return std::nullopt;
}

}  // namespace oracles
