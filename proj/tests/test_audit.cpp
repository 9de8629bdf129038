#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "facloc/audit.hpp"
#include "facloc/transform.hpp"
#include "example_rules.hpp"
#include "oracles.hpp"

using namespace facloc;

TEST_CASE("rule view dispatches to the right evaluator") {
  MedianRule med = examples::median_rule();
  CoalitionRule coa = examples::coalition_rule();
  RuleView mv(med);
  RuleView cv(coa);
  CHECK(mv.is_median());
  CHECK_FALSE(cv.is_median());
  CHECK(mv.space() == med.space);
  CHECK(cv.agents() == coa.agents);
  Profile p{{0, 3, 3}, {1, 1, 3}};
  CHECK(mv.eval(p) == eval_median_rule(med, p));
  CHECK(cv.eval(p) == eval_coalition_rule(coa, p));
  CHECK(mv.eval(p) == cv.eval(p));
}

TEST_CASE("profile ranking round trip") {
  const int m = 4;
  AgentPartition agents{3, 3};
  CHECK(profile_rank({{0, 0, 0}, {0, 0, 0}}, m) == 0);
  // Agent 0 is the most significant digit; the last dipped agent the least.
  CHECK(profile_rank({{0, 0, 0}, {0, 0, 1}}, m) == 1);
  CHECK(profile_rank({{1, 0, 0}, {0, 0, 0}}, m) == 1024);

  for (std::uint64_t rank : {0ull, 1ull, 128ull, 769ull, 4095ull}) {
    Profile p = profile_from_rank(rank, m, agents);
    CHECK(static_cast<int>(p.peaks.size()) == agents.peaked);
    CHECK(static_cast<int>(p.dips.size()) == agents.dipped);
    CHECK(profile_rank(p, m) == rank);
  }

  Profile p = profile_from_rank(128, m, agents);
  CHECK(p.peaks == std::vector<int>{0, 0, 2});
  CHECK(p.dips == std::vector<int>{0, 0, 0});
}

TEST_CASE("profile space size saturates instead of overflowing") {
  AlternativeSpace space = examples::space4();
  CHECK(profile_space_size(space, {3, 3}) == 4096);
  CHECK(profile_space_size(space, {0, 1}) == 4);
  CHECK(profile_space_size(space, {20, 20}) == UINT64_MAX);
}

TEST_CASE("tabulation matches direct evaluation") {
  MedianRule med = examples::median_rule();
  RuleView view(med);
  std::vector<int> table = tabulate(view, 1 << 20);
  REQUIRE(table.size() == 4096);
  for (std::uint64_t r = 0; r < table.size(); ++r)
    CHECK(table[r] == view.eval(profile_from_rank(r, 4, med.agents)));

  CHECK(tabulate(view, 1 << 20, 4) == table);  // worker count is invisible
  CHECK_THROWS_AS(tabulate(view, 100), BudgetError);
}

TEST_CASE("reference rule has no profitable misreport") {
  MedianRule med = examples::median_rule();
  AuditOutcome outcome = find_manipulation(RuleView(med));
  CHECK_FALSE(outcome.witness.has_value());
  CHECK(outcome.exhaustive);
  // deviators * other-reports * rankings * misreports
  CHECK(outcome.examined == 6ull * 1024 * 8 * 4);

  CoalitionRule coa = examples::coalition_rule();
  AuditOutcome same = find_manipulation(RuleView(coa));
  CHECK_FALSE(same.witness.has_value());
  CHECK(same.exhaustive);
  CHECK(same.examined == outcome.examined);
}

TEST_CASE("manipulation search agrees with the brute-force oracle") {
  std::vector<Rational> pts;
  for (int i = 1; i <= 3; ++i) {
    pts.emplace_back(i);
    AlternativeSpace space(pts);
    const int m = space.size();
    for (int a = 0; a <= 2; ++a) {
      for (int d = 0; d <= 2; ++d) {
        if (a + d == 0) continue;
        if (a == 0 && m > 2) continue;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          CAPTURE(m);
          CAPTURE(a);
          CAPTURE(d);
          CAPTURE(seed);
          MedianRule med = random_median_rule(space, {a, d}, seed);
          AuditOutcome got = find_manipulation(RuleView(med));
          CHECK(got.exhaustive);
          CHECK(got.witness.has_value() ==
                oracles::brute_manipulation(RuleView(med)).has_value());

          CoalitionRule coa = random_coalition_rule(space, {a, d}, seed);
          AuditOutcome got2 = find_manipulation(RuleView(coa));
          CHECK(got2.exhaustive);
          CHECK(got2.witness.has_value() ==
                oracles::brute_manipulation(RuleView(coa)).has_value());
        }
      }
    }
  }
}

TEST_CASE("broken nesting yields a replayable manipulation") {
  CoalitionRule rule = examples::broken_nesting();
  RuleView view(rule);
  AuditOutcome outcome = find_manipulation(view);
  REQUIRE(outcome.witness.has_value());
  const Witness& w = *outcome.witness;
  CHECK(w.kind == WitnessKind::Manipulation);
  REQUIRE(w.agents.size() == 1);
  REQUIRE(w.rankings.size() == 1);
  CHECK(replay_witness(view, w));

  // The oracle agrees that a deviation exists.
  CHECK(oracles::brute_manipulation(view).has_value());

  // Tampering breaks the replay.
  Witness bad = w;
  bad.outcome_after = bad.outcome_before;
  CHECK_FALSE(replay_witness(view, bad));
  Witness wrong_truth = w;
  wrong_truth.rankings[0] =
      make_ranking(PrefType::Peaked, {3, 2, 1, 0});  // peak elsewhere
  CHECK_FALSE(replay_witness(view, wrong_truth));
}

TEST_CASE("structurally broken but behaviorally harmless quota set") {
  // Dropping the mandatory quota component leaves a rule whose median never
  // actually reaches supporter counts that could use it: the search and the
  // oracle both come up empty even though validation rejects the rule.
  MedianRule rule = examples::broken_missing_min();
  REQUIRE_FALSE(validate_median_rule(rule).ok());
  AuditOutcome outcome = find_manipulation(RuleView(rule));
  CHECK(outcome.exhaustive);
  CHECK_FALSE(outcome.witness.has_value());
  CHECK_FALSE(oracles::brute_manipulation(RuleView(rule)).has_value());
}

TEST_CASE("manipulation search is deterministic across worker counts") {
  CoalitionRule rule = examples::broken_nesting();
  AuditBudget serial;
  serial.jobs = 1;
  AuditBudget parallel;
  parallel.jobs = 4;
  AuditOutcome a = find_manipulation(RuleView(rule), serial);
  AuditOutcome b = find_manipulation(RuleView(rule), parallel);
  REQUIRE(a.witness.has_value());
  REQUIRE(b.witness.has_value());
  CHECK(a.examined == b.examined);
  CHECK(a.witness->profile == b.witness->profile);
  CHECK(a.witness->altered == b.witness->altered);
  CHECK(a.witness->agents == b.witness->agents);

  MedianRule clean = examples::median_rule();
  AuditOutcome c = find_manipulation(RuleView(clean), serial);
  AuditOutcome d = find_manipulation(RuleView(clean), parallel);
  CHECK(c.examined == d.examined);
  CHECK(c.exhaustive == d.exhaustive);
}

TEST_CASE("sampled manipulation search is seed-reproducible") {
  AuditBudget budget;
  budget.max_exhaustive = 1;  // force sampling
  budget.samples = 3000;
  budget.seed = 42;
  CoalitionRule rule = examples::broken_nesting();
  AuditOutcome a = find_manipulation(RuleView(rule), budget);
  AuditOutcome b = find_manipulation(RuleView(rule), budget);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.examined == b.examined);
  REQUIRE(a.witness.has_value() == b.witness.has_value());
  if (a.witness.has_value()) {
    CHECK(a.witness->profile == b.witness->profile);
    CHECK(a.witness->agents == b.witness->agents);
    CHECK(replay_witness(RuleView(rule), *a.witness));
  }

  MedianRule clean = examples::median_rule();
  AuditOutcome c = find_manipulation(RuleView(clean), budget);
  CHECK_FALSE(c.exhaustive);
  CHECK_FALSE(c.witness.has_value());
  CHECK(c.examined == budget.samples);
}

TEST_CASE("type anonymity holds for the reference rule") {
  MedianRule med = examples::median_rule();
  AuditOutcome outcome = check_type_anonymity(RuleView(med));
  CHECK_FALSE(outcome.witness.has_value());
  CHECK(outcome.exhaustive);
  CHECK(outcome.examined == 4096ull * 6);  // profiles * same-type pairs
}

TEST_CASE("agent-favoring rule fails type anonymity at a known spot") {
  CoalitionRule rule = examples::lopsided_rule();
  RuleView view(rule);
  AuditOutcome outcome = check_type_anonymity(view);
  REQUIRE(outcome.witness.has_value());
  const Witness& w = *outcome.witness;
  CHECK(w.kind == WitnessKind::AnonymityViolation);
  // First hit in scan order: profile rank 128, second peaked transposition.
  CHECK(outcome.examined == 770);
  CHECK(w.profile.peaks == std::vector<int>{0, 0, 2});
  CHECK(w.profile.dips == std::vector<int>{0, 0, 0});
  CHECK(w.agents == std::vector<int>{0, 2});
  CHECK(w.altered.peaks == std::vector<int>{2, 0, 0});
  CHECK(w.outcome_before == 2);
  CHECK(w.outcome_after == 1);
  CHECK(replay_witness(view, w));

  Witness bad = w;
  bad.outcome_after = bad.outcome_before;
  CHECK_FALSE(replay_witness(view, bad));
}

TEST_CASE("anonymity check with no same-type pair passes vacuously") {
  AlternativeSpace space({Rational(1), Rational(2)});
  MedianRule rule{space, {0, 1}, {ExtElem::pair(0)}, {{ExtElem::pair(0), {{0, 1}}}}};
  REQUIRE(validate_median_rule(rule).ok());
  AuditOutcome outcome = check_type_anonymity(RuleView(rule));
  CHECK_FALSE(outcome.witness.has_value());
  CHECK(outcome.exhaustive);
  CHECK(outcome.examined == 0);
}

TEST_CASE("equivalence check certifies the conversion") {
  MedianRule med = examples::median_rule();
  CoalitionRule coa = examples::coalition_rule();
  AuditOutcome outcome = check_equivalence(RuleView(med), RuleView(coa));
  CHECK_FALSE(outcome.witness.has_value());
  CHECK(outcome.exhaustive);
  CHECK(outcome.examined == 4096);

  AuditOutcome self = check_equivalence(RuleView(med), RuleView(med));
  CHECK_FALSE(self.witness.has_value());
}

TEST_CASE("equivalence check finds the first disagreement") {
  CoalitionRule coa = examples::coalition_rule();
  CoalitionRule lop = examples::lopsided_rule();
  AuditOutcome outcome = check_equivalence(RuleView(coa), RuleView(lop));
  REQUIRE(outcome.witness.has_value());
  const Witness& w = *outcome.witness;
  CHECK(w.kind == WitnessKind::EquivalenceCounterexample);
  CHECK(w.outcome_before != w.outcome_after);
  CHECK(outcome.examined == profile_rank(w.profile, 4) + 1);
  CHECK(replay_equivalence_witness(RuleView(coa), RuleView(lop), w));
  CHECK_FALSE(replay_witness(RuleView(coa), w));  // needs the second rule

  MedianRule small = examples::median_rule_2x2();
  CHECK_THROWS_AS(check_equivalence(RuleView(coa), RuleView(small)),
                  std::invalid_argument);
}

TEST_CASE("no coalition can jointly profit against the smaller rule") {
  MedianRule rule = examples::median_rule_2x2();
  REQUIRE(validate_median_rule(rule).ok());
  AuditOutcome outcome = find_group_manipulation(RuleView(rule));
  CHECK_FALSE(outcome.witness.has_value());
  CHECK(outcome.exhaustive);

  // Independent count of the deviation space: coalitions by size, times
  // other agents' reports, joint rankings, and joint misreports.
  auto choose = [](int n, int k) {
    std::uint64_t out = 1;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
  };
  std::uint64_t want = 0;
  for (int k = 1; k <= 4; ++k) {
    std::uint64_t per_member = 8ull * 4;  // rankings * misreports, m = 4
    std::uint64_t joint = 1;
    for (int i = 0; i < k; ++i) joint *= per_member;
    std::uint64_t others = 1;
    for (int i = 0; i < 4 - k; ++i) others *= 4;
    want += choose(4, k) * others * joint;
  }
  CHECK(outcome.examined == want);
}

TEST_CASE("group search caps coalition size") {
  CoalitionRule rule = examples::broken_nesting();
  AuditBudget singles;
  singles.gsp_coalition_cap = 1;
  AuditOutcome outcome = find_group_manipulation(RuleView(rule), singles);
  REQUIRE(outcome.witness.has_value());
  CHECK(outcome.witness->kind == WitnessKind::GroupManipulation);
  CHECK(outcome.witness->agents.size() == 1);
  CHECK(replay_witness(RuleView(rule), *outcome.witness));
}

TEST_CASE("group search rejects societies beyond the mask width") {
  AlternativeSpace space({Rational(1), Rational(2)});
  MedianRule rule{space, {16, 15},
                  std::vector<ExtElem>(17, ExtElem::single(0)), {}};
  rule.phantoms.back() = ExtElem::pair(0);
  CHECK_THROWS_AS(find_group_manipulation(RuleView(rule)), BudgetError);
}

TEST_CASE("sampled group search is seed-reproducible") {
  CoalitionRule rule = examples::broken_nesting();
  AuditBudget budget;
  budget.max_exhaustive = 1;
  budget.samples = 2000;
  budget.seed = 9;
  AuditOutcome a = find_group_manipulation(RuleView(rule), budget);
  AuditOutcome b = find_group_manipulation(RuleView(rule), budget);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.examined == b.examined);
  REQUIRE(a.witness.has_value() == b.witness.has_value());
  if (a.witness.has_value()) {
    CHECK(a.witness->profile == b.witness->profile);
    CHECK(a.witness->agents == b.witness->agents);
    CHECK(replay_witness(RuleView(rule), *a.witness));
  }
}

TEST_CASE("rule generators reject impossible societies") {
  AlternativeSpace space({Rational(1), Rational(2), Rational(3)});
  CHECK_THROWS_AS(random_median_rule(space, {0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_median_rule(space, {0, 2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_coalition_rule(space, {0, 0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_coalition_rule(space, {0, 2}, 1), std::invalid_argument);
}

TEST_CASE("rule generators are seed-deterministic") {
  AlternativeSpace space = examples::space4();
  MedianRule m1 = random_median_rule(space, {3, 3}, 11);
  MedianRule m2 = random_median_rule(space, {3, 3}, 11);
  CHECK(m1.phantoms == m2.phantoms);
  REQUIRE(m1.quota_sets.size() == m2.quota_sets.size());
  for (std::size_t i = 0; i < m1.quota_sets.size(); ++i)
    CHECK(m1.quota_sets[i].quotas == m2.quota_sets[i].quotas);

  CoalitionRule c1 = random_coalition_rule(space, {3, 3}, 11);
  CoalitionRule c2 = random_coalition_rule(space, {3, 3}, 11);
  REQUIRE(c1.lcs.entries.size() == c2.lcs.entries.size());
  for (std::size_t i = 0; i < c1.lcs.entries.size(); ++i) {
    CHECK(c1.lcs.entries[i].element == c2.lcs.entries[i].element);
    CHECK(c1.lcs.entries[i].threshold == c2.lcs.entries[i].threshold);
  }
}
