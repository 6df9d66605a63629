#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace qgse {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria (all of them, or the ids in `only`), printing
/// one pass/fail line per criterion to `log` when given. Shared suite runs
/// (exact + splitting phase estimation over the built-in potential suite) are
/// computed once and reused across criteria.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr,
                                            const std::set<int>& only = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace qgse
