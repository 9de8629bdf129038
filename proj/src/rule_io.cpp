#include "facloc/rule_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>

namespace facloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ParseError(message); }

const json& need(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

void only_fields(const json& obj, std::initializer_list<const char*> allowed,
                 const char* where) {
  if (!obj.is_object()) fail(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* ok) { return key == ok; }) == allowed.end())
      fail(std::string(where) + ": unknown field \"" + key + "\"");
  }
}

Rational parse_rational(const json& value, const char* where) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_string()) {
    try {
      return Rational::parse(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(std::string(where) + ": " + e.what());
    }
  }
  fail(std::string(where) + ": expected an integer or a \"p/q\" string");
}

json rational_json(const Rational& value) {
  if (value.den() == 1) return json(value.num());
  return json(value.str());
}

int parse_index(const json& value, const AlternativeSpace& space, const char* where) {
  Rational r = parse_rational(value, where);
  int idx = space.index_of(r);
  if (idx < 0) fail(std::string(where) + ": " + r.str() + " is not an alternative");
  return idx;
}

ExtElem parse_elem(const json& value, const AlternativeSpace& space,
                   const char* where) {
  if (!value.is_object() || value.size() != 1)
    fail(std::string(where) +
         ": expected {\"single\": v} or {\"pair\": [v, w]}");
  if (auto it = value.find("single"); it != value.end())
    return ExtElem::single(parse_index(*it, space, where));
  auto it = value.find("pair");
  if (it == value.end())
    fail(std::string(where) +
         ": expected {\"single\": v} or {\"pair\": [v, w]}");
  if (!it->is_array() || it->size() != 2)
    fail(std::string(where) + ": a pair needs exactly two coordinates");
  int lo = parse_index((*it)[0], space, where);
  int hi = parse_index((*it)[1], space, where);
  if (hi != lo + 1)
    fail(std::string(where) + ": pair endpoints must be adjacent alternatives");
  return ExtElem::pair(lo);
}

json elem_json(ExtElem e, const AlternativeSpace& space) {
  if (e.is_single()) return json{{"single", rational_json(space.point(e.index()))}};
  return json{{"pair", json::array({rational_json(space.point(e.left())),
                                    rational_json(space.point(e.right()))})}};
}

int parse_small_int(const json& value, int lo, int hi, const char* where) {
  if (!value.is_number_integer())
    fail(std::string(where) + ": expected an integer");
  std::int64_t v = value.get<std::int64_t>();
  if (v < lo || v > hi)
    fail(std::string(where) + ": " + std::to_string(v) + " out of range [" +
         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

CoalitionMask parse_coalition(const json& value, int width, const char* where) {
  if (!value.is_array()) fail(std::string(where) + ": expected an agent list");
  CoalitionMask mask = 0;
  for (const json& member : value) {
    int i = parse_small_int(member, 0, width - 1, where);
    CoalitionMask bit = CoalitionMask{1} << i;
    if (mask & bit)
      fail(std::string(where) + ": duplicate agent " + std::to_string(i));
    mask |= bit;
  }
  return mask;
}

json coalition_json(CoalitionMask mask) {
  json out = json::array();
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

std::vector<CoalitionMask> parse_coalition_list(const json& value, int width,
                                                const char* where) {
  if (!value.is_array()) fail(std::string(where) + ": expected a list of coalitions");
  std::vector<CoalitionMask> out;
  for (const json& item : value) out.push_back(parse_coalition(item, width, where));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    fail(std::string(where) + ": duplicate coalition");
  return out;
}

template <typename Entry>
void sort_and_check_keys(std::vector<Entry>& entries, ExtElem Entry::*key,
                         const char* where) {
  std::sort(entries.begin(), entries.end(),
            [&](const Entry& x, const Entry& y) { return x.*key < y.*key; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].*key == entries[i - 1].*key)
      fail(std::string(where) + ": duplicate entry for one element");
}

AlternativeSpace parse_space(const json& doc) {
  const json& omega = need(doc, "omega", "rule");
  if (!omega.is_array() || omega.empty())
    fail("omega: expected a nonempty array of coordinates");
  std::vector<Rational> points;
  for (const json& v : omega) points.push_back(parse_rational(v, "omega"));
  try {
    return AlternativeSpace(std::move(points));
  } catch (const std::invalid_argument& e) {
    fail(std::string("omega: ") + e.what());
  }
}

AgentPartition parse_agents(const json& doc) {
  const json& agents = need(doc, "agents", "rule");
  only_fields(agents, {"a", "d"}, "agents");
  AgentPartition out;
  out.peaked = parse_small_int(need(agents, "a", "agents"), 0, 1 << 20, "agents");
  out.dipped = parse_small_int(need(agents, "d", "agents"), 0, 1 << 20, "agents");
  if (out.total() < 1) fail("agents: the society needs at least one agent");
  return out;
}

MedianRule parse_median(const json& doc, AlternativeSpace space,
                        AgentPartition agents) {
  only_fields(doc, {"omega", "agents", "representation", "phantoms", "quota_sets"},
              "rule");
  MedianRule rule{std::move(space), agents, {}, {}};

  const json& phantoms = need(doc, "phantoms", "rule");
  if (!phantoms.is_array()) fail("phantoms: expected an array");
  for (const json& v : phantoms)
    rule.phantoms.push_back(parse_elem(v, rule.space, "phantoms"));
  // Order in the file is irrelevant; the multiset is stored sorted.
  std::sort(rule.phantoms.begin(), rule.phantoms.end());

  const json& sets = doc.value("quota_sets", json::array());
  if (!sets.is_array()) fail("quota_sets: expected an array");
  for (const json& item : sets) {
    only_fields(item, {"element", "quotas"}, "quota_sets");
    QuotaSet qs;
    ExtElem e =
        parse_elem(need(item, "element", "quota_sets"), rule.space, "quota_sets");
    if (!e.is_pair()) fail("quota_sets: keys must be pairs");
    qs.pair = e;
    const json& quotas = need(item, "quotas", "quota_sets");
    if (!quotas.is_array()) fail("quota_sets: quotas must be an array");
    for (const json& q : quotas) {
      if (!q.is_array() || q.size() != 2)
        fail("quota_sets: each quota is a [peaked, dipped] pair");
      qs.quotas.push_back({parse_small_int(q[0], 0, 1 << 20, "quota_sets"),
                           parse_small_int(q[1], 0, 1 << 20, "quota_sets")});
    }
    rule.quota_sets.push_back(std::move(qs));
  }
  sort_and_check_keys(rule.quota_sets, &QuotaSet::pair, "quota_sets");
  return rule;
}

CoalitionRule parse_coalition_rule_json(const json& doc, AlternativeSpace space,
                                        AgentPartition agents) {
  only_fields(doc,
              {"omega", "agents", "representation", "form", "left_coalitions",
               "decisive"},
              "rule");
  CoalitionRule rule{std::move(space), agents, {}, {}};

  const json& form = need(doc, "form", "rule");
  if (form == "anonymous")
    rule.lcs.type_anonymous = true;
  else if (form == "general")
    rule.lcs.type_anonymous = false;
  else
    fail("form: expected \"anonymous\" or \"general\"");

  const int a = agents.peaked;
  const int n = agents.total();
  if (!rule.lcs.type_anonymous && (a > 32 || n > 32))
    fail("form: general form supports at most 32 agents");

  const json& entries = need(doc, "left_coalitions", "rule");
  if (!entries.is_array() || entries.empty())
    fail("left_coalitions: expected a nonempty array");
  for (const json& item : entries) {
    LcsEntry entry;
    if (rule.lcs.type_anonymous) {
      only_fields(item, {"element", "threshold"}, "left_coalitions");
      entry.threshold = parse_small_int(need(item, "threshold", "left_coalitions"), 0,
                                        a + 1, "left_coalitions");
    } else {
      only_fields(item, {"element", "coalitions"}, "left_coalitions");
      entry.threshold = -1;
      entry.minimal = parse_coalition_list(need(item, "coalitions", "left_coalitions"),
                                           a, "left_coalitions");
    }
    entry.element =
        parse_elem(need(item, "element", "left_coalitions"), rule.space,
                   "left_coalitions");
    rule.lcs.entries.push_back(std::move(entry));
  }
  sort_and_check_keys(rule.lcs.entries, &LcsEntry::element, "left_coalitions");

  const json& decisive = doc.value("decisive", json::array());
  if (!decisive.is_array()) fail("decisive: expected an array");
  for (const json& item : decisive) {
    DecisiveEntry entry;
    ExtElem e = parse_elem(need(item, "element", "decisive"), rule.space, "decisive");
    if (!e.is_pair()) fail("decisive: keys must be pairs");
    entry.pair = e;
    if (rule.lcs.type_anonymous) {
      only_fields(item, {"element", "counts"}, "decisive");
      const json& counts = need(item, "counts", "decisive");
      if (!counts.is_array()) fail("decisive: counts must be an array");
      for (const json& c : counts) {
        if (!c.is_array() || c.size() != 2)
          fail("decisive: each count is a [peaked, dipped] pair");
        entry.counts.push_back({parse_small_int(c[0], 0, 1 << 20, "decisive"),
                                parse_small_int(c[1], 0, 1 << 20, "decisive")});
      }
    } else {
      only_fields(item, {"element", "coalitions"}, "decisive");
      entry.minimal = parse_coalition_list(need(item, "coalitions", "decisive"), n,
                                           "decisive");
    }
    rule.decisive.push_back(std::move(entry));
  }
  sort_and_check_keys(rule.decisive, &DecisiveEntry::pair, "decisive");
  return rule;
}

}  // namespace

RuleView view_of(const AnyRule& rule) {
  if (const auto* m = std::get_if<MedianRule>(&rule)) return RuleView(*m);
  return RuleView(std::get<CoalitionRule>(rule));
}

ValidationReport validate_any(const AnyRule& rule) {
  if (const auto* m = std::get_if<MedianRule>(&rule)) return validate_median_rule(*m);
  return validate_coalition_rule(std::get<CoalitionRule>(rule));
}

AnyRule parse_rule_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("rule: expected a JSON object");
  AlternativeSpace space = parse_space(doc);
  AgentPartition agents = parse_agents(doc);
  const json& rep = need(doc, "representation", "rule");
  if (rep == "median") return parse_median(doc, std::move(space), agents);
  if (rep == "coalition")
    return parse_coalition_rule_json(doc, std::move(space), agents);
  fail("representation: expected \"median\" or \"coalition\"");
}

AnyRule load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return parse_rule_json(doc);
}

nlohmann::json rule_to_json(const AnyRule& rule) {
  json doc = json::object();
  const AlternativeSpace& space = view_of(rule).space();
  const AgentPartition& agents = view_of(rule).agents();
  doc["omega"] = json::array();
  for (const Rational& p : space.points()) doc["omega"].push_back(rational_json(p));
  doc["agents"] = {{"a", agents.peaked}, {"d", agents.dipped}};

  if (const auto* m = std::get_if<MedianRule>(&rule)) {
    doc["representation"] = "median";
    doc["phantoms"] = json::array();
    for (ExtElem e : m->phantoms) doc["phantoms"].push_back(elem_json(e, space));
    doc["quota_sets"] = json::array();
    for (const QuotaSet& qs : m->quota_sets) {
      json quotas = json::array();
      for (const DoubleQuota& q : qs.quotas)
        quotas.push_back(json::array({q.peaked, q.dipped}));
      doc["quota_sets"].push_back(
          {{"element", elem_json(qs.pair, space)}, {"quotas", quotas}});
    }
    return doc;
  }

  const auto& c = std::get<CoalitionRule>(rule);
  doc["representation"] = "coalition";
  doc["form"] = c.lcs.type_anonymous ? "anonymous" : "general";
  doc["left_coalitions"] = json::array();
  for (const LcsEntry& entry : c.lcs.entries) {
    json item = {{"element", elem_json(entry.element, space)}};
    if (c.lcs.type_anonymous) {
      item["threshold"] = entry.threshold;
    } else {
      json list = json::array();
      for (CoalitionMask mask : entry.minimal) list.push_back(coalition_json(mask));
      item["coalitions"] = list;
    }
    doc["left_coalitions"].push_back(item);
  }
  doc["decisive"] = json::array();
  for (const DecisiveEntry& entry : c.decisive) {
    json item = {{"element", elem_json(entry.pair, space)}};
    if (c.lcs.type_anonymous) {
      json counts = json::array();
      for (const CountPair& cp : entry.counts)
        counts.push_back(json::array({cp.peaked, cp.dipped}));
      item["counts"] = counts;
    } else {
      json list = json::array();
      for (CoalitionMask mask : entry.minimal) list.push_back(coalition_json(mask));
      item["coalitions"] = list;
    }
    doc["decisive"].push_back(item);
  }
  return doc;
}

void write_rule_file(const std::string& path, const AnyRule& rule) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  out << rule_to_json(rule).dump(2) << '\n';
}

Profile parse_profile_json(const nlohmann::json& doc, const AlternativeSpace& space,
                           const AgentPartition& agents) {
  only_fields(doc, {"peaks", "dips"}, "profile");
  Profile p;
  const json& peaks = need(doc, "peaks", "profile");
  const json& dips = need(doc, "dips", "profile");
  if (!peaks.is_array() || !dips.is_array())
    fail("profile: peaks and dips must be arrays");
  for (const json& v : peaks) p.peaks.push_back(parse_index(v, space, "peaks"));
  for (const json& v : dips) p.dips.push_back(parse_index(v, space, "dips"));
  if (static_cast<int>(p.peaks.size()) != agents.peaked ||
      static_cast<int>(p.dips.size()) != agents.dipped)
    fail("profile: expected " + std::to_string(agents.peaked) + " peaks and " +
         std::to_string(agents.dipped) + " dips");
  return p;
}

Profile load_profile_file(const std::string& path, const AlternativeSpace& space,
                          const AgentPartition& agents) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return parse_profile_json(doc, space, agents);
}

nlohmann::json profile_to_json(const Profile& profile, const AlternativeSpace& space) {
  json peaks = json::array();
  json dips = json::array();
  for (int p : profile.peaks) peaks.push_back(rational_json(space.point(p)));
  for (int d : profile.dips) dips.push_back(rational_json(space.point(d)));
  return {{"peaks", peaks}, {"dips", dips}};
}

nlohmann::json witness_to_json(const Witness& witness, const AlternativeSpace& space) {
  json doc = json::object();
  switch (witness.kind) {
    case WitnessKind::Manipulation:
      doc["kind"] = "manipulation";
      break;
    case WitnessKind::GroupManipulation:
      doc["kind"] = "group_manipulation";
      break;
    case WitnessKind::AnonymityViolation:
      doc["kind"] = "anonymity_violation";
      break;
    case WitnessKind::EquivalenceCounterexample:
      doc["kind"] = "equivalence_counterexample";
      break;
  }
  doc["profile"] = profile_to_json(witness.profile, space);
  if (witness.kind != WitnessKind::EquivalenceCounterexample)
    doc["altered"] = profile_to_json(witness.altered, space);
  if (!witness.agents.empty()) doc["agents"] = witness.agents;
  if (!witness.rankings.empty()) {
    json ranks = json::array();
    for (const Ranking& r : witness.rankings) {
      json order = json::array();
      for (int alt : r.order) order.push_back(rational_json(space.point(alt)));
      ranks.push_back(order);
    }
    doc["rankings"] = ranks;
  }
  doc["outcome_before"] = rational_json(space.point(witness.outcome_before));
  doc["outcome_after"] = rational_json(space.point(witness.outcome_after));
  return doc;
}

}  // namespace facloc
