#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"

#include "facloc/audit.hpp"
#include "facloc/coalition_rule.hpp"
#include "facloc/median_rule.hpp"

namespace facloc {

/// Malformed or inconsistent input file (bad JSON, unknown fields, values
/// outside the alternative space, non-adjacent pairs, size mismatches).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyRule = std::variant<MedianRule, CoalitionRule>;

RuleView view_of(const AnyRule& rule);
ValidationReport validate_any(const AnyRule& rule);

/// Rule files are JSON objects with "omega", "agents", "representation" and
/// the representation-specific body; README documents the schema. Unknown
/// fields are rejected. Rationals appear as integers or "p/q" strings.
AnyRule parse_rule_json(const nlohmann::json& doc);
AnyRule load_rule_file(const std::string& path);
nlohmann::json rule_to_json(const AnyRule& rule);
void write_rule_file(const std::string& path, const AnyRule& rule);

/// Profile files carry "peaks" and "dips" lists of coordinates drawn from
/// the rule's omega; lengths must match the partition.
Profile parse_profile_json(const nlohmann::json& doc, const AlternativeSpace& space,
                           const AgentPartition& agents);
Profile load_profile_file(const std::string& path, const AlternativeSpace& space,
                          const AgentPartition& agents);
nlohmann::json profile_to_json(const Profile& profile, const AlternativeSpace& space);

nlohmann::json witness_to_json(const Witness& witness, const AlternativeSpace& space);

}  // namespace facloc
