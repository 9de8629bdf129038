// Hand-built rules used across the test suites: the worked reference rules
// on omega = {1,2,3,4} with three peaked and three dipped agents, a smaller
// two-by-two variant, and deliberately broken mutations.
#pragma once

#include "facloc/coalition_rule.hpp"
#include "facloc/median_rule.hpp"

namespace examples {

using namespace facloc;

inline AlternativeSpace space4() {
  return AlternativeSpace({Rational(1), Rational(2), Rational(3), Rational(4)});
}

/// Phantoms (1, 2, (3,4), (3,4)); quota set {(0,2), (1,1)} at (3,4).
inline MedianRule median_rule() {
  MedianRule rule{space4(), {3, 3}, {}, {}};
  rule.phantoms = {ExtElem::single(0), ExtElem::single(1), ExtElem::pair(2),
                   ExtElem::pair(2)};
  rule.quota_sets = {{ExtElem::pair(2), {{0, 2}, {1, 1}}}};
  return rule;
}

/// Thresholds 3, 2, 2, 0 on range {1, 2, 3, (3,4)}; counts {(0,2), (1,1)}.
inline CoalitionRule coalition_rule() {
  CoalitionRule rule{space4(), {3, 3}, {}, {}};
  rule.lcs.type_anonymous = true;
  rule.lcs.entries = {{ExtElem::single(0), 3, {}},
                      {ExtElem::single(1), 2, {}},
                      {ExtElem::single(2), 2, {}},
                      {ExtElem::pair(2), 0, {}}};
  rule.decisive = {{ExtElem::pair(2), {{0, 2}, {1, 1}}, {}}};
  return rule;
}

/// General-form system that is strategy-proof but not type-anonymous:
/// L(1) = {A}, L(2) = L(3) = {{0,2},{1,2}}, L((3,4)) = {empty}, and the
/// decisive family pairs up dipped agents plus the asymmetric {1,3}.
inline CoalitionRule lopsided_rule() {
  CoalitionRule rule{space4(), {3, 3}, {}, {}};
  rule.lcs.type_anonymous = false;
  rule.lcs.entries = {{ExtElem::single(0), -1, {0b111}},
                      {ExtElem::single(1), -1, {0b101, 0b110}},
                      {ExtElem::single(2), -1, {0b101, 0b110}},
                      {ExtElem::pair(2), -1, {0}}};
  // Society bits: peaked agents 0..2, dipped agents 3..5. The masks are
  // {1,3}, {3,4}, {3,5}, {4,5} in ascending order.
  rule.decisive = {{ExtElem::pair(2),
                    {},
                    {(1u << 1) | (1u << 3), (1u << 3) | (1u << 4),
                     (1u << 3) | (1u << 5), (1u << 4) | (1u << 5)}}};
  return rule;
}

/// Smaller valid rule: omega {1,2,3,4}, two peaked, two dipped; phantoms
/// (1, 2, (3,4)); quota {(0,2)} at (3,4).
inline MedianRule median_rule_2x2() {
  MedianRule rule{space4(), {2, 2}, {}, {}};
  rule.phantoms = {ExtElem::single(0), ExtElem::single(1), ExtElem::pair(2)};
  rule.quota_sets = {{ExtElem::pair(2), {{0, 2}}}};
  return rule;
}

/// Quota (0,0): no dipped support required, breaking the quota bounds.
inline MedianRule broken_quota_zero() {
  MedianRule rule = median_rule();
  rule.quota_sets[0].quotas = {{0, 0}};
  return rule;
}

/// Quota set {(2,1)}: drops the mandatory minimal peaked component 0.
inline MedianRule broken_missing_min() {
  MedianRule rule = median_rule();
  rule.quota_sets[0].quotas = {{2, 1}};
  return rule;
}

/// General-form system whose families are not nested along the range:
/// L(2) = {{0}} is not contained in L(3) = {{1,2}}. Genuinely manipulable.
inline CoalitionRule broken_nesting() {
  CoalitionRule rule{space4(), {3, 3}, {}, {}};
  rule.lcs.type_anonymous = false;
  rule.lcs.entries = {{ExtElem::single(0), -1, {0b111}},
                      {ExtElem::single(1), -1, {0b001}},
                      {ExtElem::single(2), -1, {0b110}},
                      {ExtElem::pair(2), -1, {0}}};
  rule.decisive = {{ExtElem::pair(2), {}, {1u << 3, 1u << 4, 1u << 5}}};
  return rule;
}

}  // namespace examples
