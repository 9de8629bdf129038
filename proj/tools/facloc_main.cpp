// Command-line front end: validate, evaluate, convert, audit, and tabulate
// rule files. Exit codes: 0 pass, 1 witness found, 2 invalid rule, 3 parse
// error, 4 inexpressible conversion, 5 budget exceeded.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "facloc/audit.hpp"
#include "facloc/rule_io.hpp"
#include "facloc/transform.hpp"

namespace {

using namespace facloc;

constexpr int kExitPass = 0;
constexpr int kExitWitness = 1;
constexpr int kExitInvalidRule = 2;
constexpr int kExitParseError = 3;
constexpr int kExitInexpressible = 4;
constexpr int kExitBudget = 5;
constexpr int kExitInternal = 70;

class Stopwatch {
 public:
  explicit Stopwatch(std::string label) : label_(std::move(label)) {}
  ~Stopwatch() {
    auto end = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(end - start_).count();
    std::fprintf(stderr, "%s elapsed %.3fs\n", label_.c_str(), secs);
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_report(const ValidationReport& report) {
  for (const std::string& code : report.checked) {
    bool broken = report.has(code);
    std::cout << "checked " << code << ": " << (broken ? "VIOLATED" : "ok") << "\n";
  }
  for (const Violation& v : report.violations)
    std::cout << "violation " << v.code << ": " << v.detail << "\n";
  for (const Violation& w : report.warnings)
    std::cout << "warning " << w.code << ": " << w.detail << "\n";
}

/// Loads and structurally validates a rule, printing violations to stderr.
/// Returns kExitPass or the exit code to bail out with.
int load_valid_rule(const std::string& path, std::optional<AnyRule>* out) {
  out->emplace(load_rule_file(path));
  ValidationReport report = validate_any(**out);
  if (!report.ok()) {
    for (const Violation& v : report.violations)
      std::cerr << "violation " << v.code << ": " << v.detail << "\n";
    return kExitInvalidRule;
  }
  return kExitPass;
}

int cmd_validate(const std::string& rule_path) {
  AnyRule rule = load_rule_file(rule_path);
  const RuleView view = view_of(rule);
  std::cout << "rule: " << (view.is_median() ? "median" : "coalition")
            << " representation, m=" << view.space().size()
            << ", a=" << view.agents().peaked << ", d=" << view.agents().dipped
            << "\n";
  ValidationReport report = validate_any(rule);
  print_report(report);
  std::cout << (report.ok() ? "valid" : "invalid") << "\n";
  return report.ok() ? kExitPass : kExitInvalidRule;
}

int cmd_eval(const std::string& rule_path, const std::string& profile_path,
             bool trace) {
  std::optional<AnyRule> loaded;
  if (int rc = load_valid_rule(rule_path, &loaded)) return rc;
  const AnyRule& rule = *loaded;
  const RuleView view = view_of(rule);
  Profile profile = load_profile_file(profile_path, view.space(), view.agents());

  if (trace) {
    ExtElem step1 = std::holds_alternative<MedianRule>(rule)
                        ? mixed_median(std::get<MedianRule>(rule), profile.peaks)
                        : omega_eval(std::get<CoalitionRule>(rule), profile.peaks);
    std::cout << "step1=" << view.space().describe(step1);
    if (step1.is_pair()) {
      int peaked = 0;
      int dipped = 0;
      for (int p : profile.peaks)
        if (pair_preference(PrefType::Peaked, p, step1) == Side::Left) ++peaked;
      for (int d : profile.dips)
        if (pair_preference(PrefType::Dipped, d, step1) == Side::Left) ++dipped;
      std::cout << " counts=(" << peaked << "," << dipped << ")";
    }
    std::cout << "\n";
  }
  std::cout << view.space().point(view.eval(profile)).str() << "\n";
  return kExitPass;
}

const char* equality_str(EqualityStatus s) {
  switch (s) {
    case EqualityStatus::Equal:
      return "equal";
    case EqualityStatus::Unequal:
      return "UNEQUAL";
    default:
      return "not checked";
  }
}

int cmd_convert(const std::string& rule_path, const std::string& target,
                const std::string& out_path, const ConversionOptions& options) {
  std::optional<AnyRule> loaded;
  if (int rc = load_valid_rule(rule_path, &loaded)) return rc;
  const AnyRule& rule = *loaded;
  Stopwatch timer("convert");

  std::optional<AnyRule> converted;
  ConversionReport report;
  bool already = (target == "median") == std::holds_alternative<MedianRule>(rule);
  if (already) {
    converted = rule;
    report.source = report.target = target;
    report.trace.push_back("source already in " + target + " representation");
    report.equality = EqualityStatus::Equal;
    report.exhaustive = true;
    report.target_validation = validate_any(*converted);
  } else if (target == "coalition") {
    auto [out, rep] = convert_to_coalition(std::get<MedianRule>(rule), options);
    converted = std::move(out);
    report = std::move(rep);
  } else {
    auto [out, rep] = convert_to_median(std::get<CoalitionRule>(rule), options);
    converted = std::move(out);
    report = std::move(rep);
  }

  std::cerr << "convert: " << report.source << " -> " << report.target << "\n";
  for (const std::string& line : report.trace) std::cerr << "  " << line << "\n";
  std::cerr << "equality: " << equality_str(report.equality) << " ("
            << report.profiles_compared << " profiles, "
            << (report.exhaustive ? "exhaustive" : "sampled") << ")\n";
  if (report.counterexample) {
    const AlternativeSpace& space = view_of(rule).space();
    std::cerr << "counterexample: "
              << profile_to_json(*report.counterexample, space).dump()
              << " source=" << space.point(report.outcome_source).str()
              << " target=" << space.point(report.outcome_target).str() << "\n";
  }
  std::cerr << "target validation: "
            << (report.target_validation.ok() ? "ok" : "INVALID") << "\n";
  for (const Violation& v : report.target_validation.violations)
    std::cerr << "  violation " << v.code << ": " << v.detail << "\n";

  if (out_path.empty())
    std::cout << rule_to_json(*converted).dump(2) << "\n";
  else
    write_rule_file(out_path, *converted);

  if (!report.target_validation.ok()) return kExitInvalidRule;
  return report.equality == EqualityStatus::Unequal ? kExitWitness : kExitPass;
}

int cmd_audit(const std::string& rule_path, const std::string& checks_csv,
              const AuditBudget& budget) {
  std::optional<AnyRule> loaded;
  if (int rc = load_valid_rule(rule_path, &loaded)) return rc;
  const AnyRule& rule = *loaded;
  const RuleView view = view_of(rule);

  std::vector<std::string> checks;
  std::stringstream ss(checks_csv);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item != "sp" && item != "gsp" && item != "anon")
      throw ParseError("unknown check \"" + item + "\" (expected sp, gsp, anon)");
    checks.push_back(item);
  }

  bool any_witness = false;
  for (const std::string& check : checks) {
    Stopwatch timer("check " + check);
    AuditOutcome outcome;
    if (check == "sp")
      outcome = find_manipulation(view, budget);
    else if (check == "gsp")
      outcome = find_group_manipulation(view, budget);
    else
      outcome = check_type_anonymity(view, budget);

    nlohmann::json record;
    record["check"] = check;
    if (outcome.witness) {
      any_witness = true;
      record["status"] = "witness";
      record["witness"] = witness_to_json(*outcome.witness, view.space());
    } else {
      record["status"] = outcome.exhaustive ? "pass" : "partial-coverage";
    }
    record["profiles_examined"] = outcome.examined;
    std::cout << record.dump() << "\n";
  }
  return any_witness ? kExitWitness : kExitPass;
}

int cmd_table(const std::string& rule_path, std::uint64_t max_entries, int jobs) {
  std::optional<AnyRule> loaded;
  if (int rc = load_valid_rule(rule_path, &loaded)) return rc;
  const AnyRule& rule = *loaded;
  const RuleView view = view_of(rule);
  const AlternativeSpace& space = view.space();
  const AgentPartition agents = view.agents();

  std::vector<int> table = tabulate(view, max_entries, jobs);
  std::string line;
  for (std::uint64_t rank = 0; rank < table.size(); ++rank) {
    Profile p = profile_from_rank(rank, space.size(), agents);
    line.clear();
    for (std::size_t i = 0; i < p.peaks.size(); ++i) {
      if (i) line += ',';
      line += space.point(p.peaks[i]).str();
    }
    line += '|';
    for (std::size_t i = 0; i < p.dips.size(); ++i) {
      if (i) line += ',';
      line += space.point(p.dips[i]).str();
    }
    line += " -> ";
    line += space.point(table[rank]).str();
    line += '\n';
    std::cout << line;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility-location rules for mixed single-peaked / single-dipped "
               "societies: evaluate, validate, convert, and audit"};
  app.require_subcommand(1);

  std::string rule_path;
  std::string profile_path;
  std::string target;
  std::string out_path;
  std::string checks = "sp,gsp,anon";
  bool trace = false;
  ConversionOptions conv;
  AuditBudget budget;

  CLI::App* validate = app.add_subcommand("validate", "Check a rule file");
  validate->add_option("rule", rule_path, "rule file")->required();

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a rule on a profile");
  eval->add_option("rule", rule_path, "rule file")->required();
  eval->add_option("profile", profile_path, "profile file")->required();
  eval->add_flag("--trace", trace, "print the first-step element and vote counts");

  CLI::App* convert = app.add_subcommand("convert", "Change representation");
  convert->add_option("rule", rule_path, "rule file")->required();
  convert->add_option("--to", target, "target representation")
      ->required()
      ->check(CLI::IsMember({"median", "coalition"}));
  convert->add_option("--out", out_path, "output file (default: stdout)");
  convert->add_option("--max-exhaustive", conv.max_exhaustive,
                      "profile-space cap for the exhaustive comparison");
  convert->add_option("--samples", conv.samples, "sample count beyond the cap");
  convert->add_option("--seed", conv.seed, "sampling seed");
  convert->add_option("--jobs", conv.jobs, "worker threads");

  CLI::App* audit = app.add_subcommand("audit", "Search for axiom violations");
  audit->add_option("rule", rule_path, "rule file")->required();
  audit->add_option("--checks", checks, "comma list from sp, gsp, anon");
  audit->add_option("--max-exhaustive", budget.max_exhaustive,
                    "deviation-space cap for exhaustive search");
  audit->add_option("--samples", budget.samples, "sample count beyond the cap");
  audit->add_option("--seed", budget.seed, "sampling seed");
  audit->add_option("--gsp-cap", budget.gsp_coalition_cap,
                    "largest deviating coalition size");
  audit->add_option("--jobs", budget.jobs, "worker threads");

  CLI::App* table = app.add_subcommand("table", "Print the full outcome table");
  table->add_option("rule", rule_path, "rule file")->required();
  table->add_option("--max-exhaustive", budget.max_exhaustive,
                    "largest profile space to tabulate");
  table->add_option("--jobs", budget.jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }

  try {
    if (validate->parsed()) return cmd_validate(rule_path);
    if (eval->parsed()) return cmd_eval(rule_path, profile_path, trace);
    if (convert->parsed()) return cmd_convert(rule_path, target, out_path, conv);
    if (audit->parsed()) return cmd_audit(rule_path, checks, budget);
    return cmd_table(rule_path, budget.max_exhaustive, budget.jobs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const InexpressibleError& e) {
    std::cerr << "inexpressible: " << e.what() << "\n";
    return kExitInexpressible;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
