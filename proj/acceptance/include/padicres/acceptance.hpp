#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace padicres::acceptance {

struct CriterionResult {
  std::string id;     // "AC1"
  std::string title;
  bool pass = false;
  std::size_t assertions = 0;
  std::size_t failures = 0;
  double seconds = 0;
  std::vector<std::string> notes;  // first failures, or the reason a criterion is red
};

/// Runs every acceptance criterion, printing one PASS/FAIL line per
/// criterion (plus up to a few failure notes) as it goes.
std::vector<CriterionResult> run_all(std::ostream& out);

/// run_all, then a summary line; 0 when every criterion passes, else 1.
int run_suite(std::ostream& out);

}  // namespace padicres::acceptance
