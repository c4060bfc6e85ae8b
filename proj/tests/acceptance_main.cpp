// Dedicated acceptance gate: one line per criterion, nonzero exit on any
// failure. `sqg-front suite acceptance` drives the same set.
#include <cstdio>

#include "sqgfront/acceptance.hpp"
#include "sqgfront/parallel.hpp"

int main(int argc, char** argv) {
  if (argc > 1) sqg::set_num_threads(std::atoi(argv[1]));
  std::vector<sqg::CriterionResult> results = sqg::run_acceptance_suite();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("[%2d] %s  %s — %s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n",
              static_cast<int>(std::count_if(results.begin(), results.end(),
                                             [](const auto& r) { return r.pass; })),
              results.size());
  return all ? 0 : 1;
}
