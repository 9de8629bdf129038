#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "facloc/audit.hpp"
#include "facloc/transform.hpp"
#include "example_rules.hpp"

using namespace facloc;

namespace {

std::vector<std::vector<int>> all_tuples(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> digits(n, 0);
  for (;;) {
    out.push_back(digits);
    int k = n - 1;
    while (k >= 0 && digits[k] == m - 1) digits[k--] = 0;
    if (k < 0) break;
    ++digits[k];
  }
  return out;
}

}  // namespace

TEST_CASE("phantom vector to threshold system") {
  LeftCoalitionSystem lcs = phantoms_to_lcs(examples::median_rule());
  CHECK(lcs.type_anonymous);
  REQUIRE(lcs.entries.size() == 4);
  CHECK(lcs.entries[0].element == ExtElem::single(0));
  CHECK(lcs.entries[0].threshold == 3);
  CHECK(lcs.entries[1].element == ExtElem::single(1));
  CHECK(lcs.entries[1].threshold == 2);
  CHECK(lcs.entries[2].element == ExtElem::single(2));
  CHECK(lcs.entries[2].threshold == 2);
  CHECK(lcs.entries[3].element == ExtElem::pair(2));
  CHECK(lcs.entries[3].threshold == 0);
}

TEST_CASE("threshold system to phantom vector") {
  std::vector<ExtElem> phantoms = lcs_to_phantoms(examples::coalition_rule());
  std::vector<ExtElem> want = {ExtElem::single(0), ExtElem::single(1),
                               ExtElem::pair(2), ExtElem::pair(2)};
  CHECK(phantoms == want);
  CHECK_THROWS_AS(lcs_to_phantoms(examples::lopsided_rule()), InexpressibleError);
}

TEST_CASE("quota and count antichains are the same data") {
  QuotaSet qs{ExtElem::pair(2), {{0, 2}, {1, 1}}};
  DecisiveEntry entry = quotas_to_decisive(qs);
  CHECK(entry.pair == qs.pair);
  REQUIRE(entry.counts.size() == 2);
  CHECK(entry.counts[0] == CountPair{0, 2});
  CHECK(entry.counts[1] == CountPair{1, 1});
  QuotaSet back = decisive_to_quotas(entry);
  CHECK(back.pair == qs.pair);
  CHECK(back.quotas == qs.quotas);
}

TEST_CASE("median to coalition reproduces the reference system") {
  auto [out, report] = convert_to_coalition(examples::median_rule());
  CHECK(report.source == "median");
  CHECK(report.target == "coalition");
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK(report.exhaustive);
  CHECK(report.profiles_compared == 4096);
  CHECK_FALSE(report.counterexample.has_value());
  CHECK(report.target_validation.ok());
  CHECK_FALSE(report.trace.empty());

  CoalitionRule want = examples::coalition_rule();
  REQUIRE(out.lcs.entries.size() == want.lcs.entries.size());
  for (std::size_t i = 0; i < want.lcs.entries.size(); ++i) {
    CHECK(out.lcs.entries[i].element == want.lcs.entries[i].element);
    CHECK(out.lcs.entries[i].threshold == want.lcs.entries[i].threshold);
  }
  REQUIRE(out.decisive.size() == 1);
  CHECK(out.decisive[0].pair == ExtElem::pair(2));
  CHECK(out.decisive[0].counts == want.decisive[0].counts);
}

TEST_CASE("coalition to median recovers the reference phantoms") {
  auto [out, report] = convert_to_median(examples::coalition_rule());
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK(report.exhaustive);
  CHECK(report.target_validation.ok());

  MedianRule want = examples::median_rule();
  CHECK(out.phantoms == want.phantoms);
  REQUIRE(out.quota_sets.size() == 1);
  CHECK(out.quota_sets[0].pair == want.quota_sets[0].pair);
  CHECK(out.quota_sets[0].quotas == want.quota_sets[0].quotas);
}

TEST_CASE("second steps agree decision by decision") {
  MedianRule med = examples::median_rule();
  CoalitionRule coa = median_to_coalition(med);
  const QuotaSet& qs = med.quota_sets[0];
  for (const auto& peaks : all_tuples(3, 4)) {
    if (mixed_median(med, peaks) != ExtElem::pair(2)) continue;
    for (const auto& dips : all_tuples(3, 4)) {
      Profile p{peaks, dips};
      Side lhs = quota_decide(qs, second_step_counts(med, p, ExtElem::pair(2)));
      CHECK(lhs == g_eval(coa, p, ExtElem::pair(2)));
    }
  }
}

TEST_CASE("rule outside the anonymous class cannot become a median rule") {
  CHECK_THROWS_AS(coalition_to_median(examples::lopsided_rule()),
                  InexpressibleError);
  CHECK_THROWS_AS(convert_to_median(examples::lopsided_rule()),
                  InexpressibleError);
}

TEST_CASE("pair without a strict threshold drop is dropped from the range") {
  AlternativeSpace space({Rational(1), Rational(2), Rational(3)});
  CoalitionRule rule{space, {3, 2}, {}, {}};
  rule.lcs.entries = {{ExtElem::single(0), 2, {}},
                      {ExtElem::pair(0), 2, {}},
                      {ExtElem::single(1), 2, {}},
                      {ExtElem::single(2), 1, {}}};
  rule.decisive = {{ExtElem::pair(0), {{2, 1}}, {}}};
  REQUIRE(validate_coalition_rule(rule).ok());

  std::vector<std::string> trace;
  MedianRule out = coalition_to_median(rule, &trace);
  std::vector<ExtElem> want = {ExtElem::single(0), ExtElem::single(0),
                               ExtElem::single(2), ExtElem::single(2)};
  CHECK(out.phantoms == want);
  CHECK(out.quota_sets.empty());  // the pair is unreachable by the median
  bool noted = false;
  for (const std::string& line : trace)
    noted = noted || line.find("unreachable") != std::string::npos;
  CHECK(noted);

  auto [target, report] = convert_to_median(rule);
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK(report.exhaustive);
  CHECK(report.target_validation.ok());
}

TEST_CASE("no peaked agents: a single pair phantom carries the whole rule") {
  AlternativeSpace space({Rational(1), Rational(2)});
  MedianRule med{space, {0, 2}, {ExtElem::pair(0)}, {{ExtElem::pair(0), {{0, 1}}}}};
  REQUIRE(validate_median_rule(med).ok());

  auto [coa, report] = convert_to_coalition(med);
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK(report.target_validation.ok());
  REQUIRE(coa.lcs.entries.size() == 1);
  CHECK(coa.lcs.entries[0].element == ExtElem::pair(0));
  CHECK(coa.lcs.entries[0].threshold == 0);

  auto [back, report2] = convert_to_median(coa);
  CHECK(report2.equality == EqualityStatus::Equal);
  CHECK(back.phantoms == med.phantoms);
  REQUIRE(back.quota_sets.size() == 1);
  CHECK(back.quota_sets[0].quotas == med.quota_sets[0].quotas);
}

TEST_CASE("no dipped agents: all-alternative phantoms round trip") {
  AlternativeSpace space({Rational(1), Rational(2), Rational(3)});
  MedianRule med{space, {2, 0}, {ExtElem::single(0), ExtElem::single(1),
                                 ExtElem::single(2)}, {}};
  REQUIRE(validate_median_rule(med).ok());
  auto [coa, report] = convert_to_coalition(med);
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK(report.target_validation.ok());
  auto [back, report2] = convert_to_median(coa);
  CHECK(report2.equality == EqualityStatus::Equal);
  CHECK(back.phantoms == med.phantoms);
}

TEST_CASE("tight budget falls back to seeded sampling") {
  ConversionOptions options;
  options.max_exhaustive = 16;  // 4096 profiles will not fit
  options.samples = 500;
  options.seed = 7;
  auto [out, report] = convert_to_coalition(examples::median_rule(), options);
  CHECK(report.equality == EqualityStatus::Equal);
  CHECK_FALSE(report.exhaustive);
  CHECK(report.profiles_compared == 500);
}

TEST_CASE("seeded rules convert losslessly in both directions") {
  std::vector<Rational> pts;
  for (int i = 1; i <= 4; ++i) {
    pts.emplace_back(i);
    AlternativeSpace space(pts);
    const int m = space.size();
    for (int a = 0; a <= 3; ++a) {
      for (int d = 0; d <= 3; ++d) {
        if (a + d == 0) continue;
        if (a == 0 && m > 2) continue;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          CAPTURE(m);
          CAPTURE(a);
          CAPTURE(d);
          CAPTURE(seed);

          MedianRule med = random_median_rule(space, {a, d}, seed);
          auto [coa, to_c] = convert_to_coalition(med);
          CHECK(to_c.equality == EqualityStatus::Equal);
          CHECK(to_c.exhaustive);
          CHECK(to_c.target_validation.ok());

          CoalitionRule src = random_coalition_rule(space, {a, d}, seed);
          auto [back, to_m] = convert_to_median(src);
          CHECK(to_m.equality == EqualityStatus::Equal);
          CHECK(to_m.exhaustive);
          CHECK(to_m.target_validation.ok());
        }
      }
    }
  }
}
