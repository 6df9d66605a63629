#pragma once

#include <string>
#include <vector>

namespace qgse {

/// Batch CLI front end. Verbs: run, sweep, fixtures, verify.
/// Exit codes: 0 pass, 1 criteria fail, 2 usage/config error.
int cli_main(const std::vector<std::string>& args);

}  // namespace qgse
