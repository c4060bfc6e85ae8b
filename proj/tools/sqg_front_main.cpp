#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sqgfront/acceptance.hpp"
#include "sqgfront/experiment.hpp"
#include "sqgfront/io.hpp"
#include "sqgfront/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sqg-front: pseudospectral front-dynamics toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker thread count (results do not depend on it)");

  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path;
  std::string run_out = "out";
  std::optional<std::uint64_t> seed_override;
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", run_out, "output directory");
  run->add_option("--seed-override", seed_override, "replace the config seed");

  auto* suite = app.add_subcommand("suite", "run the acceptance or quick suite");
  std::string suite_name;
  std::string suite_out = "out";
  suite->add_option("name", suite_name, "acceptance | quick")->required();
  suite->add_option("--out", suite_out, "output directory");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) sqg::set_num_threads(threads);

  if (run->parsed()) {
    sqg::ExperimentResult res =
        sqg::run_experiment(config_path, run_out, seed_override);
    if (res.exit_code != sqg::kExitOk)
      std::fprintf(stderr, "error: %s\n", res.error.c_str());
    else
      std::printf("ok: summary written to %s/summary.json\n", run_out.c_str());
    return res.exit_code;
  }

  if (suite_name != "acceptance" && suite_name != "quick") {
    std::fprintf(stderr,
                 "error: unknown suite '%s' (use acceptance or quick)\n",
                 suite_name.c_str());
    return sqg::kExitConfigError;
  }
  std::vector<sqg::CriterionResult> results =
      suite_name == "acceptance" ? sqg::run_acceptance_suite()
                                 : sqg::run_quick_suite();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("[%2d] %s  %s — %s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
  }
  std::filesystem::create_directories(suite_out);
  sqg::write_json(sqg::suite_report(results),
                  std::filesystem::path(suite_out) / "suite_report.json");
  std::printf("%s: %s\n", suite_name.c_str(),
              all ? "all criteria passed" : "FAILURES present");
  return all ? sqg::kExitOk : sqg::kExitNumericalFailure;
}
