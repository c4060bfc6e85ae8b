#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sqgfront/experiment.hpp"
#include "sqgfront/io.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("sqg_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  fs::path p = dir / "config.json";
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("field round trip through the binary format") {
  fs::path dir = temp_dir("io");
  GridSpec g = make_grid(4.0, 32);
  Field f = Field::from_values(g, [](double x) { return std::sin(x) + 0.25; });
  write_field(f, 1.5, dir / "field");
  double t = 0.0;
  Field back = read_field(dir / "field", &t);
  CHECK(t == 1.5);
  CHECK(back.grid() == g);
  for (int j = 0; j < g.num_points; ++j)
    CHECK(back.values()[j] == f.values()[j]);

  write_field_csv(f, dir / "field.csv");
  std::string csv = slurp(dir / "field.csv");
  CHECK(csv.rfind("x,value", 0) == 0);
}

TEST_CASE("evolve experiment with zero datum") {
  fs::path dir = temp_dir("evolve_zero");
  nlohmann::json cfg = {
      {"kind", "evolve"},
      {"grid", {{"L", 16.0 * 3.14159265358979}, {"N", 64}}},
      {"solver", {{"dt", 0.05}, {"t_final", 0.2}}},
      {"datum", {{"family", "zero"}}}};
  ExperimentResult res =
      run_experiment(write_config(dir, cfg), dir / "out", std::nullopt);
  REQUIRE(res.exit_code == kExitOk);
  CHECK(res.summary["mass_initial"].get<double>() == 0.0);
  CHECK(res.summary["mass_rel_drift_max"].get<double>() == 0.0);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "trajectory" / "monitors.csv"));
  CHECK(fs::exists(dir / "out" / "trajectory" / "manifest.json"));
  CHECK(fs::exists(dir / "out" / "quadrature.csv"));
}

TEST_CASE("q-constant experiment reproduces the confirmed closed form") {
  fs::path dir = temp_dir("qconst");
  nlohmann::json cfg = {{"kind", "q-constant"},
                        {"grid", {{"L", 3.14159265358979}, {"N", 16}}},
                        {"datum", {{"family", "zero"}}},
                        {"params", {{"xi", {1.0}}}}};
  ExperimentResult res =
      run_experiment(write_config(dir, cfg), dir / "out", std::nullopt);
  REQUIRE(res.exit_code == kExitOk);
  double re = res.summary["q"][0]["re"].get<double>();
  CHECK(std::abs(re - (-0.9241962407465937)) < 1e-4);
}

TEST_CASE("malformed config gives a line-anchored diagnostic") {
  fs::path dir = temp_dir("badjson");
  fs::path p = dir / "config.json";
  {
    std::ofstream out(p);
    out << "{\n  \"kind\": \"evolve\",\n  oops\n}\n";
  }
  ExperimentResult res = run_experiment(p, dir / "out", std::nullopt);
  CHECK(res.exit_code == kExitConfigError);
  CHECK(res.error.find(":3") != std::string::npos);  // line anchor
}

TEST_CASE("config validation errors") {
  fs::path dir = temp_dir("badcfg");
  nlohmann::json noise_no_seed = {
      {"kind", "evolve"},
      {"grid", {{"L", 16.0}, {"N", 64}}},
      {"datum", {{"family", "noise"}, {"amplitude", 0.1}, {"band", 4.0}}}};
  ExperimentResult r1 =
      run_experiment(write_config(dir, noise_no_seed), dir / "out", std::nullopt);
  CHECK(r1.exit_code == kExitConfigError);
  CHECK(r1.error.find("seed") != std::string::npos);

  nlohmann::json unknown = {{"kind", "frobnicate"},
                            {"grid", {{"L", 16.0}, {"N", 64}}},
                            {"datum", {{"family", "zero"}}}};
  ExperimentResult r2 =
      run_experiment(write_config(dir, unknown), dir / "out", std::nullopt);
  CHECK(r2.exit_code == kExitConfigError);
}

#ifdef SQG_CLI_PATH
TEST_CASE("CLI outputs are byte-identical across thread counts") {
  fs::path dir = temp_dir("cli_det");
  nlohmann::json cfg = {
      {"kind", "evolve"},
      {"grid", {{"L", 50.26548245743669}, {"N", 128}}},
      {"solver", {{"dt", 0.02}, {"t_final", 0.2}, {"record_stride", 5}}},
      {"datum",
       {{"family", "noise"}, {"amplitude", 0.05}, {"band", 2.0}, {"seed", 42}}}};
  fs::path cpath = write_config(dir, cfg);

  auto run_with = [&](const std::string& tag, int threads) {
    std::ostringstream cmd;
    cmd << SQG_CLI_PATH << " --threads " << threads << " run " << cpath
        << " --out " << (dir / tag) << " > /dev/null";
    return std::system(cmd.str().c_str());
  };
  REQUIRE(run_with("t1", 1) == 0);
  REQUIRE(run_with("t8", 8) == 0);
  CHECK(slurp(dir / "t1" / "summary.json") == slurp(dir / "t8" / "summary.json"));
  CHECK(slurp(dir / "t1" / "trajectory" / "monitors.csv") ==
        slurp(dir / "t8" / "trajectory" / "monitors.csv"));
  CHECK(slurp(dir / "t1" / "trajectory" / "snapshot_000001.f64") ==
        slurp(dir / "t8" / "trajectory" / "snapshot_000001.f64"));

  // Unknown suite name exits with the config-error code.
  std::ostringstream bad;
  bad << SQG_CLI_PATH << " suite nonsense > /dev/null 2>&1";
  int rc = std::system(bad.str().c_str());
  CHECK(WEXITSTATUS(rc) == 1);
}
#endif
