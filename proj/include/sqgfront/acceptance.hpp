#ifndef SQGFRONT_ACCEPTANCE_HPP
#define SQGFRONT_ACCEPTANCE_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace sqg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;      // one-line human summary
  nlohmann::json data;     // deterministic payload (no wall times)
};

// The full acceptance set (ids 1..13) at the pinned tolerances.
std::vector<CriterionResult> run_acceptance_suite();

// A smoke subset sized for a fresh checkout (< 60 s).
std::vector<CriterionResult> run_quick_suite();

nlohmann::json suite_report(const std::vector<CriterionResult>& results);

}  // namespace sqg

#endif
