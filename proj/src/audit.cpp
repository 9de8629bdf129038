#include "facloc/audit.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <limits>
#include <random>
#include <thread>

namespace facloc {

const AlternativeSpace& RuleView::space() const {
  return std::visit([](const auto* r) -> const AlternativeSpace& { return r->space; },
                    rule_);
}

const AgentPartition& RuleView::agents() const {
  return std::visit([](const auto* r) -> const AgentPartition& { return r->agents; },
                    rule_);
}

int RuleView::eval(const Profile& profile) const {
  if (const auto* m = std::get_if<const MedianRule*>(&rule_))
    return eval_median_rule(**m, profile);
  return eval_coalition_rule(*std::get<const CoalitionRule*>(rule_), profile);
}

namespace {

constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kBlock = 4096;

std::uint64_t sat_mul(std::uint64_t x, std::uint64_t y) {
  if (x == 0 || y == 0) return 0;
  if (x > kNoHit / y) return kNoHit;
  return x * y;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out = sat_mul(out, base);
  return out;
}

/// Smallest index in [0, total) where hit() is true, scanned in blocks.
/// The result does not depend on the number of jobs: blocks are handed out
/// in order and a block is only skipped once a strictly earlier hit exists.
std::uint64_t first_hit(std::uint64_t total, int jobs,
                        const std::function<bool(std::uint64_t)>& hit) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || total <= 2 * kBlock) {
    for (std::uint64_t i = 0; i < total; ++i)
      if (hit(i)) return i;
    return kNoHit;
  }
  std::atomic<std::uint64_t> best{kNoHit};
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t start = next_block.fetch_add(1) * kBlock;
      if (start >= total || start >= best.load()) return;
      std::uint64_t end = std::min(total, start + kBlock);
      for (std::uint64_t i = start; i < end; ++i)
        if (hit(i)) {
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;  // later indices in this block cannot beat i
        }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return best.load();
}

void parallel_fill(std::uint64_t total, int jobs,
                   const std::function<void(std::uint64_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || total < 4 * kBlock) {
    for (std::uint64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    std::uint64_t lo = t * chunk;
    std::uint64_t hi = std::min(total, lo + chunk);
    pool.emplace_back([lo, hi, &fn]() {
      for (std::uint64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Evaluation frontend that tabulates once when the profile space is small
/// enough and falls back to direct evaluation otherwise.
class Evaluator {
 public:
  Evaluator(const RuleView& rule, std::uint64_t table_budget, int jobs)
      : rule_(rule), m_(rule.space().size()) {
    if (profile_space_size(rule.space(), rule.agents()) <= table_budget)
      table_ = tabulate(rule, table_budget, jobs);
  }

  int operator()(const Profile& profile) const {
    if (table_.empty()) return rule_.eval(profile);
    return table_[profile_rank(profile, m_)];
  }

 private:
  RuleView rule_;
  int m_;
  std::vector<int> table_;
};

/// Draws follow the documented contract: engine() % bound.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int below(int bound) { return static_cast<int>(engine_() % bound); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::uint64_t profile_space_size(const AlternativeSpace& space,
                                 const AgentPartition& agents) {
  return ipow(static_cast<std::uint64_t>(space.size()), agents.total());
}

Profile profile_from_rank(std::uint64_t rank, int m, const AgentPartition& agents) {
  Profile p;
  p.peaks.assign(agents.peaked, 0);
  p.dips.assign(agents.dipped, 0);
  for (int agent = agents.total() - 1; agent >= 0; --agent) {
    int digit = static_cast<int>(rank % m);
    rank /= m;
    if (agent < agents.peaked)
      p.peaks[agent] = digit;
    else
      p.dips[agent - agents.peaked] = digit;
  }
  return p;
}

std::uint64_t profile_rank(const Profile& profile, int m) {
  std::uint64_t rank = 0;
  for (int p : profile.peaks) rank = rank * m + static_cast<std::uint64_t>(p);
  for (int d : profile.dips) rank = rank * m + static_cast<std::uint64_t>(d);
  return rank;
}

std::vector<int> tabulate(const RuleView& rule, std::uint64_t max_entries, int jobs) {
  std::uint64_t total = profile_space_size(rule.space(), rule.agents());
  if (total > max_entries)
    throw BudgetError("profile space of " + std::to_string(total) +
                      " exceeds the tabulation budget");
  std::vector<int> table(total, -1);
  const int m = rule.space().size();
  const AgentPartition agents = rule.agents();
  parallel_fill(total, jobs, [&](std::uint64_t r) {
    table[r] = rule.eval(profile_from_rank(r, m, agents));
  });
  return table;
}

AuditOutcome find_manipulation(const RuleView& rule, const AuditBudget& budget) {
  const AlternativeSpace& space = rule.space();
  const AgentPartition agents = rule.agents();
  const int m = space.size();
  const int n = agents.total();
  const int a = agents.peaked;
  const std::uint64_t ranking_count = std::uint64_t{1} << (m - 1);
  const std::uint64_t others_count = ipow(m, n - 1);
  const std::uint64_t total =
      sat_mul(sat_mul(sat_mul(n, others_count), ranking_count), m);

  const std::vector<Ranking> peaked = enumerate_rankings(space, PrefType::Peaked);
  const std::vector<Ranking> dipped =
      agents.dipped > 0 ? enumerate_rankings(space, PrefType::Dipped)
                        : std::vector<Ranking>{};

  // Deviation index layout, fastest last:
  //   deviator | others' reports | true ranking | misreport
  struct Case {
    int deviator;
    const Ranking* ranking;
    int misreport;
    Profile truth;
    Profile lie;
  };
  auto decode = [&](std::uint64_t idx, std::uint64_t others_idx_override,
                    bool use_override, Case* out) {
    out->misreport = static_cast<int>(idx % m);
    idx /= m;
    std::uint64_t rank_idx = idx % ranking_count;
    idx /= ranking_count;
    std::uint64_t others_idx = use_override ? others_idx_override : idx % others_count;
    out->deviator = static_cast<int>(use_override ? idx : idx / others_count);
    out->ranking = out->deviator < a ? &peaked[rank_idx] : &dipped[rank_idx];
    Profile p;
    p.peaks.assign(a, 0);
    p.dips.assign(n - a, 0);
    for (int agent = n - 1; agent >= 0; --agent) {
      if (agent == out->deviator) continue;
      int digit = static_cast<int>(others_idx % m);
      others_idx /= m;
      if (agent < a)
        p.peaks[agent] = digit;
      else
        p.dips[agent - a] = digit;
    }
    auto slot = [&](Profile& pr, int value) {
      if (out->deviator < a)
        pr.peaks[out->deviator] = value;
      else
        pr.dips[out->deviator - a] = value;
    };
    out->truth = p;
    slot(out->truth, out->ranking->extremum());
    out->lie = std::move(p);
    slot(out->lie, out->misreport);
  };

  AuditOutcome result;
  auto wrap = [&](const Case& c, int before, int after) {
    Witness w;
    w.kind = WitnessKind::Manipulation;
    w.profile = c.truth;
    w.altered = c.lie;
    w.agents = {c.deviator};
    w.rankings = {*c.ranking};
    w.outcome_before = before;
    w.outcome_after = after;
    result.witness = w;
  };

  if (total <= budget.max_exhaustive) {
    Evaluator eval(rule, budget.max_exhaustive, budget.jobs);
    auto hit = [&](std::uint64_t idx) {
      Case c;
      decode(idx, 0, false, &c);
      int before = eval(c.truth);
      int after = eval(c.lie);
      return c.ranking->prefers(after, before);
    };
    std::uint64_t at = first_hit(total, budget.jobs, hit);
    result.exhaustive = true;
    result.examined = at == kNoHit ? total : at + 1;
    if (at != kNoHit) {
      Case c;
      decode(at, 0, false, &c);
      wrap(c, eval(c.truth), eval(c.lie));
    }
    return result;
  }

  Evaluator eval(rule, budget.max_exhaustive, budget.jobs);
  Rng rng(budget.seed);
  result.exhaustive = false;
  result.examined = budget.samples;
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    // Draw order: deviator, others' reports (ascending agent), ranking,
    // misreport.
    int deviator = rng.below(n);
    std::uint64_t others_idx = 0;
    for (int agent = 0; agent < n; ++agent) {
      if (agent == deviator) continue;
      others_idx = others_idx * m + static_cast<std::uint64_t>(rng.below(m));
    }
    std::uint64_t rank_idx =
        static_cast<std::uint64_t>(rng.below(static_cast<int>(ranking_count)));
    int mis = rng.below(m);
    std::uint64_t idx =
        (static_cast<std::uint64_t>(deviator) * ranking_count + rank_idx) * m + mis;
    Case c;
    decode(idx, others_idx, true, &c);
    int before = eval(c.truth);
    int after = eval(c.lie);
    if (c.ranking->prefers(after, before)) {
      result.examined = s + 1;
      wrap(c, before, after);
      return result;
    }
  }
  return result;
}

AuditOutcome check_type_anonymity(const RuleView& rule, const AuditBudget& budget) {
  const AlternativeSpace& space = rule.space();
  const AgentPartition agents = rule.agents();
  const int m = space.size();
  const int a = agents.peaked;

  std::vector<std::pair<int, int>> swaps;
  for (int i = 0; i < a; ++i)
    for (int j = i + 1; j < a; ++j) swaps.emplace_back(i, j);
  for (int i = 0; i < agents.dipped; ++i)
    for (int j = i + 1; j < agents.dipped; ++j) swaps.emplace_back(a + i, a + j);

  AuditOutcome result;
  if (swaps.empty()) {
    result.exhaustive = true;
    return result;
  }

  auto transpose = [&](const Profile& p, int i, int j) {
    Profile q = p;
    int& x = i < a ? q.peaks[i] : q.dips[i - a];
    int& y = j < a ? q.peaks[j] : q.dips[j - a];
    std::swap(x, y);
    return q;
  };
  auto wrap = [&](const Profile& p, std::pair<int, int> sw, int before, int after) {
    Witness w;
    w.kind = WitnessKind::AnonymityViolation;
    w.profile = p;
    w.altered = transpose(p, sw.first, sw.second);
    w.agents = {sw.first, sw.second};
    w.outcome_before = before;
    w.outcome_after = after;
    result.witness = w;
  };

  const std::uint64_t profiles = profile_space_size(space, agents);
  const std::uint64_t total = sat_mul(profiles, swaps.size());
  if (total <= budget.max_exhaustive) {
    Evaluator eval(rule, budget.max_exhaustive, budget.jobs);
    auto outcomes = [&](std::uint64_t idx, Profile* p, Profile* q,
                        std::pair<int, int>* sw) {
      *sw = swaps[idx % swaps.size()];
      *p = profile_from_rank(idx / swaps.size(), m, agents);
      *q = transpose(*p, sw->first, sw->second);
    };
    auto hit = [&](std::uint64_t idx) {
      Profile p, q;
      std::pair<int, int> sw;
      outcomes(idx, &p, &q, &sw);
      return eval(p) != eval(q);
    };
    std::uint64_t at = first_hit(total, budget.jobs, hit);
    result.exhaustive = true;
    result.examined = at == kNoHit ? total : at + 1;
    if (at != kNoHit) {
      Profile p, q;
      std::pair<int, int> sw;
      outcomes(at, &p, &q, &sw);
      wrap(p, sw, eval(p), eval(q));
    }
    return result;
  }

  Evaluator eval(rule, budget.max_exhaustive, budget.jobs);
  Rng rng(budget.seed);
  result.exhaustive = false;
  result.examined = budget.samples;
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    // Draw order: profile digits (agent 0 first), then the transposition.
    Profile p;
    for (int i = 0; i < a; ++i) p.peaks.push_back(rng.below(m));
    for (int i = 0; i < agents.dipped; ++i) p.dips.push_back(rng.below(m));
    auto sw = swaps[rng.below(static_cast<int>(swaps.size()))];
    Profile q = transpose(p, sw.first, sw.second);
    int before = eval(p);
    int after = eval(q);
    if (before != after) {
      result.examined = s + 1;
      wrap(p, sw, before, after);
      return result;
    }
  }
  return result;
}

AuditOutcome check_equivalence(const RuleView& first, const RuleView& second,
                               const AuditBudget& budget) {
  if (!(first.space() == second.space()) || !(first.agents() == second.agents()))
    throw std::invalid_argument("rules live on different spaces or societies");
  const int m = first.space().size();
  const AgentPartition agents = first.agents();
  const std::uint64_t total = profile_space_size(first.space(), agents);

  AuditOutcome result;
  auto wrap = [&](const Profile& p, int lhs, int rhs) {
    Witness w;
    w.kind = WitnessKind::EquivalenceCounterexample;
    w.profile = p;
    w.altered = p;
    w.outcome_before = lhs;
    w.outcome_after = rhs;
    result.witness = w;
  };

  if (total <= budget.max_exhaustive) {
    std::vector<int> lhs = tabulate(first, budget.max_exhaustive, budget.jobs);
    std::vector<int> rhs = tabulate(second, budget.max_exhaustive, budget.jobs);
    auto hit = [&](std::uint64_t r) { return lhs[r] != rhs[r]; };
    std::uint64_t at = first_hit(total, budget.jobs, hit);
    result.exhaustive = true;
    result.examined = at == kNoHit ? total : at + 1;
    if (at != kNoHit) wrap(profile_from_rank(at, m, agents), lhs[at], rhs[at]);
    return result;
  }

  Rng rng(budget.seed);
  result.exhaustive = false;
  result.examined = budget.samples;
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    Profile p;
    for (int i = 0; i < agents.peaked; ++i) p.peaks.push_back(rng.below(m));
    for (int i = 0; i < agents.dipped; ++i) p.dips.push_back(rng.below(m));
    int l = first.eval(p);
    int r = second.eval(p);
    if (l != r) {
      result.examined = s + 1;
      wrap(p, l, r);
      return result;
    }
  }
  return result;
}

AuditOutcome find_group_manipulation(const RuleView& rule, const AuditBudget& budget) {
  const AlternativeSpace& space = rule.space();
  const AgentPartition agents = rule.agents();
  const int m = space.size();
  const int n = agents.total();
  const int a = agents.peaked;
  if (n > 30)
    throw BudgetError("coalition search supports at most 30 agents");
  const int cap = std::min(budget.gsp_coalition_cap, n);
  const std::uint64_t ranking_count = std::uint64_t{1} << (m - 1);

  const std::vector<Ranking> peaked = enumerate_rankings(space, PrefType::Peaked);
  const std::vector<Ranking> dipped =
    agents.dipped > 0 ? enumerate_rankings(space, PrefType::Dipped)
                      : std::vector<Ranking>{};
  auto rankings_of = [&](int agent) -> const std::vector<Ranking>& {
    return agent < a ? peaked : dipped;
  };

  std::uint64_t total = 0;
  for (CoalitionMask mask = 1; mask < (CoalitionMask{1} << n); ++mask) {
    int k = std::popcount(mask);
    if (k > cap) continue;
    total += sat_mul(sat_mul(ipow(m, n - k), ipow(ranking_count, k)), ipow(m, k));
    if (total > budget.max_exhaustive) break;
  }

  AuditOutcome result;
  auto wrap = [&](const Profile& truth, const Profile& lie,
                  const std::vector<int>& members,
                  const std::vector<const Ranking*>& ranks, int before, int after) {
    Witness w;
    w.kind = WitnessKind::GroupManipulation;
    w.profile = truth;
    w.altered = lie;
    w.agents = members;
    for (const Ranking* r : ranks) w.rankings.push_back(*r);
    w.outcome_before = before;
    w.outcome_after = after;
    result.witness = w;
  };

  Evaluator eval(rule, budget.max_exhaustive, budget.jobs);
  auto set_slot = [&](Profile& p, int agent, int value) {
    if (agent < a)
      p.peaks[agent] = value;
    else
      p.dips[agent - a] = value;
  };

  if (total <= budget.max_exhaustive) {
    result.exhaustive = true;
    std::uint64_t examined = 0;
    for (CoalitionMask mask = 1; mask < (CoalitionMask{1} << n); ++mask) {
      int k = std::popcount(mask);
      if (k > cap) continue;
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1u) members.push_back(i);

      const std::uint64_t others_total = ipow(m, n - k);
      const std::uint64_t ranks_total = ipow(ranking_count, k);
      const std::uint64_t lies_total = ipow(m, k);
      for (std::uint64_t others_idx = 0; others_idx < others_total; ++others_idx) {
        Profile base;
        base.peaks.assign(a, 0);
        base.dips.assign(n - a, 0);
        std::uint64_t rest = others_idx;
        for (int agent = n - 1; agent >= 0; --agent) {
          if (mask >> agent & 1u) continue;
          set_slot(base, agent, static_cast<int>(rest % m));
          rest /= m;
        }
        for (std::uint64_t ridx = 0; ridx < ranks_total; ++ridx) {
          std::vector<const Ranking*> ranks(k);
          std::uint64_t rr = ridx;
          for (int pos = k - 1; pos >= 0; --pos) {
            ranks[pos] = &rankings_of(members[pos])[rr % ranking_count];
            rr /= ranking_count;
          }
          Profile truth = base;
          for (int pos = 0; pos < k; ++pos)
            set_slot(truth, members[pos], ranks[pos]->extremum());
          int before = eval(truth);
          for (std::uint64_t lidx = 0; lidx < lies_total; ++lidx) {
            ++examined;
            Profile lie = base;
            std::uint64_t lr = lidx;
            for (int pos = k - 1; pos >= 0; --pos) {
              set_slot(lie, members[pos], static_cast<int>(lr % m));
              lr /= m;
            }
            int after = eval(lie);
            bool all_better = true;
            for (int pos = 0; pos < k && all_better; ++pos)
              all_better = ranks[pos]->prefers(after, before);
            if (all_better) {
              result.examined = examined;
              wrap(truth, lie, members, ranks, before, after);
              return result;
            }
          }
        }
      }
    }
    result.examined = examined;
    return result;
  }

  // Sampled mode. Draw order per sample: coalition mask (redrawn until its
  // size fits the cap), others' reports ascending, each member's ranking,
  // each member's misreport.
  Rng rng(budget.seed);
  result.exhaustive = false;
  result.examined = budget.samples;
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    CoalitionMask mask = 0;
    do {
      mask = static_cast<CoalitionMask>(rng.below((1 << n) - 1)) + 1;
    } while (std::popcount(mask) > cap);
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) members.push_back(i);
    Profile truth;
    truth.peaks.assign(a, 0);
    truth.dips.assign(n - a, 0);
    for (int agent = 0; agent < n; ++agent)
      if (!(mask >> agent & 1u)) set_slot(truth, agent, rng.below(m));
    std::vector<const Ranking*> ranks;
    for (int member : members)
      ranks.push_back(&rankings_of(member)[rng.below(static_cast<int>(ranking_count))]);
    Profile lie = truth;
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      set_slot(truth, members[pos], ranks[pos]->extremum());
      set_slot(lie, members[pos], rng.below(m));
    }
    int before = eval(truth);
    int after = eval(lie);
    bool all_better = true;
    for (std::size_t pos = 0; pos < members.size() && all_better; ++pos)
      all_better = ranks[pos]->prefers(after, before);
    if (all_better) {
      result.examined = s + 1;
      wrap(truth, lie, members, ranks, before, after);
      return result;
    }
  }
  return result;
}

bool replay_witness(const RuleView& rule, const Witness& witness) {
  switch (witness.kind) {
    case WitnessKind::Manipulation:
    case WitnessKind::GroupManipulation: {
      if (witness.agents.empty() || witness.agents.size() != witness.rankings.size())
        return false;
      const int a = rule.agents().peaked;
      for (std::size_t i = 0; i < witness.agents.size(); ++i) {
        int agent = witness.agents[i];
        const Ranking& r = witness.rankings[i];
        bool is_peaked = agent < a;
        if ((r.type == PrefType::Peaked) != is_peaked) return false;
        int truthful = is_peaked ? witness.profile.peaks[agent]
                                 : witness.profile.dips[agent - a];
        if (truthful != r.extremum()) return false;
      }
      int before = rule.eval(witness.profile);
      int after = rule.eval(witness.altered);
      if (before != witness.outcome_before || after != witness.outcome_after)
        return false;
      for (const Ranking& r : witness.rankings)
        if (!r.prefers(after, before)) return false;
      return true;
    }
    case WitnessKind::AnonymityViolation: {
      int before = rule.eval(witness.profile);
      int after = rule.eval(witness.altered);
      return before == witness.outcome_before && after == witness.outcome_after &&
             before != after;
    }
    case WitnessKind::EquivalenceCounterexample:
      return false;  // needs both rules
  }
  return false;
}

bool replay_equivalence_witness(const RuleView& first, const RuleView& second,
                                const Witness& witness) {
  if (witness.kind != WitnessKind::EquivalenceCounterexample) return false;
  int lhs = first.eval(witness.profile);
  int rhs = second.eval(witness.profile);
  return lhs == witness.outcome_before && rhs == witness.outcome_after && lhs != rhs;
}

namespace {

void require_feasible(const AlternativeSpace& space, const AgentPartition& agents) {
  if (agents.peaked < 0 || agents.dipped < 0 || agents.total() < 1)
    throw std::invalid_argument("society needs at least one agent");
  if (agents.peaked == 0 && space.size() > 2)
    throw std::invalid_argument(
        "no valid rule: an empty peaked side forces at most two alternatives");
}

}  // namespace

MedianRule random_median_rule(const AlternativeSpace& space,
                              const AgentPartition& agents, std::uint64_t seed) {
  require_feasible(space, agents);
  const int m = space.size();
  const int a = agents.peaked;
  const int d = agents.dipped;
  Rng rng(seed);

  MedianRule rule{space, agents, {}, {}};
  if (a == 0) {
    rule.phantoms.push_back(m == 1 ? space.min_single() : space.min_pair());
  } else {
    // Endpoint candidates are extreme in the element order, so sorting the
    // middles in keeps the end conditions intact.
    const bool pairs_ok = d > 0 && space.has_pairs();
    rule.phantoms.push_back(pairs_ok && rng.below(2) == 1 ? space.min_pair()
                                                          : space.min_single());
    rule.phantoms.push_back(pairs_ok && rng.below(2) == 1 ? space.max_pair()
                                                          : space.max_single());
    for (int i = 0; i < a - 1; ++i) {
      int key = pairs_ok ? rng.below(2 * m - 1) : 2 * rng.below(m);
      rule.phantoms.push_back(ExtElem::from_key(key));
    }
    std::sort(rule.phantoms.begin(), rule.phantoms.end());
  }

  for (ExtElem e : median_range(rule)) {
    if (!e.is_pair()) continue;
    PhantomCounts pc = count_phantoms_at(rule, e);
    QuotaSet qs;
    qs.pair = e;
    int qa = a + 1 - pc.at_or_left;
    int qd = 1 + rng.below(d);
    qs.quotas.push_back({qa, qd});
    // Extra quotas climb the peaked component inside the pair's phantom
    // window while strictly relaxing the dipped one, keeping an antichain.
    int extras = pc.at > 1 ? rng.below(pc.at) : 0;
    for (int t = 0; t < extras; ++t) {
      if (qa + 1 > a || qd <= 1) break;
      qa += 1;
      qd = 1 + rng.below(qd - 1);
      qs.quotas.push_back({qa, qd});
    }
    rule.quota_sets.push_back(qs);
  }
  return rule;
}

CoalitionRule random_coalition_rule(const AlternativeSpace& space,
                                    const AgentPartition& agents, std::uint64_t seed) {
  require_feasible(space, agents);
  const int m = space.size();
  const int a = agents.peaked;
  const int d = agents.dipped;
  Rng rng(seed);

  CoalitionRule rule{space, agents, {}, {}};
  rule.lcs.type_anonymous = true;

  std::vector<ExtElem> elements;
  if (a == 0) {
    elements.push_back(m == 1 ? space.min_single() : space.min_pair());
  } else if (m == 1) {
    elements.push_back(space.min_single());
  } else if (d == 0) {
    for (int i = 0; i < m; ++i) elements.push_back(ExtElem::single(i));
  } else {
    // Coin every optional element, redrawing until both ends are reachable.
    for (;;) {
      elements.clear();
      if (rng.below(2) == 0) elements.push_back(space.min_single());
      for (int i = 1; i + 1 < m; ++i) elements.push_back(ExtElem::single(i));
      if (rng.below(2) == 0) elements.push_back(space.max_single());
      for (int j = 0; j + 1 < m; ++j)
        if (rng.below(2) == 0) elements.push_back(ExtElem::pair(j));
      if (elements.empty()) continue;
      std::sort(elements.begin(), elements.end());
      bool low_ok = elements.front() == space.min_single() ||
                    elements.front() == space.min_pair();
      bool high_ok = elements.back() == space.max_single() ||
                     elements.back() == space.max_pair();
      if (low_ok && high_ok) break;
    }
  }

  int prev = a + 1;  // effective threshold left of the range
  for (std::size_t i = 0; i < elements.size(); ++i) {
    LcsEntry entry;
    entry.element = elements[i];
    bool is_last = i + 1 == elements.size();
    if (a == 0)
      entry.threshold = 0;
    else if (is_last && elements[i].is_pair())
      entry.threshold = 0;
    else if (i == 0)
      entry.threshold = 1 + rng.below(a);
    else
      entry.threshold = 1 + rng.below(prev);
    prev = entry.threshold;
    rule.lcs.entries.push_back(entry);
  }

  for (std::size_t i = 0; i < rule.lcs.entries.size(); ++i) {
    const LcsEntry& entry = rule.lcs.entries[i];
    if (!entry.element.is_pair()) continue;
    // Threshold of the element just left of the pair bounds the counts from
    // above; a leftmost pair is unconstrained.
    int left_threshold = i == 0 ? a + 1 : rule.lcs.entries[i - 1].threshold;
    DecisiveEntry w;
    w.pair = entry.element;
    int qa = entry.threshold;
    int qd = 1 + rng.below(d);
    w.counts.push_back({qa, qd});
    int extras = rng.below(3);
    for (int t = 0; t < extras; ++t) {
      if (qa + 1 >= left_threshold || qa + 1 > a || qd <= 1) break;
      qa += 1;
      qd = 1 + rng.below(qd - 1);
      w.counts.push_back({qa, qd});
    }
    rule.decisive.push_back(w);
  }
  return rule;
}

}  // namespace facloc
