#pragma once

#include <string>
#include <vector>

namespace facloc {

/// One broken rule condition, identified by a stable machine-readable code
/// (see README for the code table) plus a human-readable detail line.
struct Violation {
  std::string code;
  std::string detail;
};

/// Result of structural validation. `checked` lists every condition code the
/// validator examined, in order, so reports can show ok lines as well as
/// failures. Warnings (e.g. unreachable range elements) do not make a rule
/// invalid.
struct ValidationReport {
  std::vector<std::string> checked;
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const {
    for (const auto& v : violations)
      if (v.code == code) return true;
    return false;
  }
};

}  // namespace facloc
