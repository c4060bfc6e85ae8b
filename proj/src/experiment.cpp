#include "sqgfront/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sqgfront/io.hpp"
#include "sqgfront/paradiff.hpp"
#include "sqgfront/rng.hpp"
#include "sqgfront/wavepacket.hpp"

namespace sqg {

namespace {

using nlohmann::json;

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const json& require(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error(std::string(where) + ": missing required key '" + key +
                       "'");
  return *it;
}

double number(const json& j, const char* key, const char* where) {
  const json& v = require(j, key, where);
  if (!v.is_number())
    throw config_error(std::string(where) + "/" + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<double>();
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  const json& kind = require(j, "kind", "/");
  if (!kind.is_string()) throw config_error("/kind: expected a string");
  cfg.kind = kind.get<std::string>();

  const json& grid = require(j, "grid", "/");
  cfg.grid = make_grid(number(grid, "L", "/grid"),
                       static_cast<int>(number(grid, "N", "/grid")));

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.dt = number_or(s, "dt", cfg.solver.dt);
    cfg.solver.t_final = number_or(s, "t_final", cfg.solver.t_final);
    cfg.solver.record_stride = static_cast<int>(
        number_or(s, "record_stride", cfg.solver.record_stride));
    cfg.solver.y_max = number_or(s, "y_max", cfg.solver.y_max);
    cfg.solver.n_y = static_cast<int>(number_or(s, "n_y", cfg.solver.n_y));
    cfg.solver.grading = number_or(s, "grading", cfg.solver.grading);
    cfg.solver.oversample =
        static_cast<int>(number_or(s, "oversample", cfg.solver.oversample));
    cfg.solver.monitor_s = number_or(s, "monitor_s", cfg.solver.monitor_s);
    cfg.solver.monitor_delta =
        number_or(s, "monitor_delta", cfg.solver.monitor_delta);
    if (s.contains("nonlinear")) cfg.solver.nonlinear = s["nonlinear"].get<bool>();
  }

  cfg.datum = require(j, "datum", "/");
  const json& fam = require(cfg.datum, "family", "/datum");
  std::string family = fam.get<std::string>();
  if (family != "gaussian" && family != "mode" && family != "noise" &&
      family != "zero")
    throw config_error("/datum/family: unknown family '" + family + "'");
  if (family == "noise") {
    if (!cfg.datum.contains("seed"))
      throw config_error(
          "/datum/seed: stochastic data require an explicit seed");
    cfg.seed = cfg.datum["seed"].get<std::uint64_t>();
    cfg.has_seed = true;
  }

  cfg.extra = j.value("params", json::object());
  cfg.config_hash = fnv1a_hex(j.dump());
  return cfg;
}

Field build_datum(const ExperimentConfig& cfg) {
  const json& d = cfg.datum;
  std::string family = d["family"].get<std::string>();
  if (family == "zero") return Field::zero(cfg.grid);
  if (family == "gaussian") {
    double a = number(d, "amplitude", "/datum");
    double sigma = number_or(d, "sigma", 1.0);
    double x0 = number_or(d, "center", 0.0);
    return Field::from_values(cfg.grid, [=](double x) {
      double u = (x - x0) / sigma;
      return a * std::exp(-u * u);
    });
  }
  if (family == "mode") {
    double a = number(d, "amplitude", "/datum");
    int k = static_cast<int>(number(d, "k", "/datum"));
    double xi = cfg.grid.xi1() * k;
    return Field::from_values(cfg.grid,
                              [=](double x) { return a * std::cos(xi * x); });
  }
  // Band-limited noise on the dyadic annulus [band, 2 band).
  double a = number(d, "amplitude", "/datum");
  double band = number(d, "band", "/datum");
  CounterRng rng(cfg.seed);
  std::vector<cd> spec(cfg.grid.num_points, cd(0.0));
  for (int k = 1; k < cfg.grid.num_points / 2; ++k) {
    double xi = cfg.grid.xi1() * k;
    if (xi < band || xi >= 2.0 * band) continue;
    cd c = a * cd(rng.normal(2 * k), rng.normal(2 * k + 1));
    spec[cfg.grid.bin_of_mode(k)] = c;
    spec[cfg.grid.bin_of_mode(-k)] = std::conj(c);
  }
  return Field::from_spectrum(cfg.grid, spec);
}

namespace {

json envelope(const ExperimentConfig& cfg) {
  json out;
  out["version"] = kVersion;
  out["config_hash"] = cfg.config_hash;
  out["kind"] = cfg.kind;
  return out;
}

json run_evolve(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  Field phi0 = build_datum(cfg);
  Trajectory traj = evolve(phi0, cfg.solver);
  json meta = envelope(cfg);
  write_trajectory(traj, out / "trajectory", meta);
  write_quadrature_csv(cfg.solver.quadrature_for(cfg.grid),
                       out / "quadrature.csv");

  double m0 = traj.monitors.front().mass;
  double drift = 0.0;
  for (const auto& m : traj.monitors)
    if (m0 > 0.0) drift = std::max(drift, std::abs(m.mass - m0) / m0);
  json s = envelope(cfg);
  s["blew_up"] = traj.blew_up;
  s["steps"] = traj.monitors.size() - 1;
  s["mass_initial"] = m0;
  s["mass_rel_drift_max"] = drift;
  s["final_hs"] = traj.monitors.back().hs;
  s["final_y"] = traj.monitors.back().y;
  return s;
}

json run_q_constant(const ExperimentConfig& cfg) {
  json s = envelope(cfg);
  json rows = json::array();
  std::vector<double> xis{1.0};
  if (cfg.extra.contains("xi")) {
    xis.clear();
    for (const auto& x : cfg.extra["xi"]) xis.push_back(x.get<double>());
  }
  for (double xi : xis) {
    cd q = q_constant(xi);
    rows.push_back({{"xi", xi}, {"re", q.real()}, {"im", q.imag()}});
  }
  s["q"] = rows;
  return s;
}

json run_paradiff_probe(const ExperimentConfig& cfg) {
  double R = number_or(cfg.extra, "R", 1.0);
  double s_exp = number_or(cfg.extra, "s", 3.0);
  int n_samples = static_cast<int>(number_or(cfg.extra, "samples", 4));
  std::uint64_t seed =
      cfg.extra.contains("seed") ? cfg.extra["seed"].get<std::uint64_t>() : 7;

  // Sample family: scaled Gaussians and band-limited noise at the R sphere.
  std::vector<Field> samples;
  for (int i = 0; i < n_samples; ++i) {
    Field u = (i % 2 == 0)
                  ? Field::from_values(cfg.grid,
                                       [&](double x) {
                                         double w = 1.0 + 0.5 * (i / 2);
                                         return std::exp(-x * x / (w * w));
                                       })
                  : [&]() {
                      CounterRng rng(seed + i);
                      std::vector<cd> spec(cfg.grid.num_points, cd(0.0));
                      for (int k = 1; k < cfg.grid.num_points / 2; ++k) {
                        double xi = cfg.grid.xi1() * k;
                        cd c = std::exp(-0.05 * xi * xi) *
                               cd(rng.normal(2 * k), rng.normal(2 * k + 1));
                        spec[cfg.grid.bin_of_mode(k)] = c;
                        spec[cfg.grid.bin_of_mode(-k)] = std::conj(c);
                      }
                      return Field::from_spectrum(cfg.grid, spec);
                    }();
    double hs = sobolev_norm(u, s_exp);
    samples.push_back((R / hs) * u);
  }

  json out = envelope(cfg);
  json probes = json::array();
  std::vector<double> rs{1.0, 6.0};
  if (cfg.extra.contains("r")) {
    rs.clear();
    for (const auto& r : cfg.extra["r"]) rs.push_back(r.get<double>());
  }
  for (double r : rs) {
    ChooseMResult res = choose_M(R, r, s_exp, samples);
    json norms = json::array();
    for (const auto& [M, norm] : res.trace)
      norms.push_back({{"M", M}, {"norm", norm}});
    probes.push_back({{"M", res.M},
                      {"r", r},
                      {"s", s_exp},
                      {"R", R},
                      {"samples", n_samples},
                      {"norms", norms},
                      {"chosen_M", res.success ? res.M : 0.0},
                      {"margin", res.margin},
                      {"success", res.success}});
  }
  out["probes"] = probes;
  return out;
}

json run_packet_test(const ExperimentConfig& cfg,
                     const std::filesystem::path& out) {
  double lambda = number_or(cfg.extra, "band", 2.0);
  int n_vel = static_cast<int>(number_or(cfg.extra, "velocities", 16));
  std::vector<long> sample_steps;
  if (cfg.extra.contains("sample_steps")) {
    for (const auto& s : cfg.extra["sample_steps"])
      sample_steps.push_back(s.get<long>());
  } else {
    long total = std::lround(cfg.solver.t_final / cfg.solver.dt);
    for (double f : {0.25, 0.354, 0.5, 0.707, 1.0})
      sample_steps.push_back(std::lround(total * f));
  }

  Field phi0 = build_datum(cfg);
  VelocityBand band = velocity_band(lambda);
  std::vector<double> vels = band.sample(n_vel);

  ProfileRecord rec;
  rec.lambda = lambda;
  Field u = phi0;
  std::size_t k = 0;
  long last = sample_steps.back();
  for (long step = 0; step <= last; ++step) {
    if (k < sample_steps.size() && step == sample_steps[k]) {
      rec.rows.push_back(gamma_profile(u, step * cfg.solver.dt, lambda, vels));
      ++k;
    }
    if (step < last) u = step_ifrk4(u, step * cfg.solver.dt, cfg.solver);
  }

  std::ofstream csv(out / "profile.csv");
  csv << "t,v,re_gamma,im_gamma,abs_gamma\n";
  csv.precision(17);
  for (const auto& row : rec.rows)
    for (std::size_t i = 0; i < row.velocities.size(); ++i)
      csv << row.t << ',' << row.velocities[i] << ',' << row.gamma[i].real()
          << ',' << row.gamma[i].imag() << ',' << std::abs(row.gamma[i])
          << '\n';

  ScatteringFit fit = fit_scattering(rec);
  json s = envelope(cfg);
  json rows = json::array();
  for (const auto& r : fit.rows)
    rows.push_back({{"v", r.v},
                    {"abs_W", std::abs(r.W)},
                    {"phase_slope_fit", r.slope_fit},
                    {"phase_slope_pred", r.slope_pred},
                    {"residual", r.residual}});
  s["fit"] = rows;
  s["t_first"] = fit.t_first;
  s["t_last"] = fit.t_last;
  write_json(s, out / "fit_report.json");
  return s;
}

json run_scaling_check(const ExperimentConfig& cfg) {
  json s = envelope(cfg);
  json rows = json::array();
  std::vector<double> kappas{0.5, 2.0};
  if (cfg.extra.contains("kappa")) {
    kappas.clear();
    for (const auto& k : cfg.extra["kappa"]) kappas.push_back(k.get<double>());
  }
  Field phi0 = build_datum(cfg);
  SolverConfig base = cfg.solver;
  base.record_stride = 1 << 28;
  Trajectory tb = evolve(phi0, base);
  if (tb.blew_up) throw numerical_failure("scaling-check: base run blew up", 0);
  for (double kappa : kappas) {
    auto [t_a, via_a] =
        scaling_transform(base.t_final, tb.snapshots.back().second, kappa);
    auto [t0, psi0] = scaling_transform(0.0, phi0, kappa);
    (void)t0;
    SolverConfig scaled = base;
    scaled.dt = kappa * base.dt;
    scaled.t_final = kappa * base.t_final;
    Trajectory ts = evolve(psi0, scaled);
    if (ts.blew_up)
      throw numerical_failure("scaling-check: scaled run blew up", kappa);
    const Field& via_b = ts.snapshots.back().second;
    double rel = (via_b - via_a).l2_norm() /
                 std::max(via_a.l2_norm(), 1e-300);
    rows.push_back({{"kappa", kappa}, {"rel_l2_discrepancy", rel}});
    (void)t_a;
  }
  s["checks"] = rows;
  return s;
}

json run_paralin_check(const ExperimentConfig& cfg,
                       const std::filesystem::path& out) {
  double M = number_or(cfg.extra, "M", 4.0);
  std::uint64_t seed =
      cfg.extra.contains("seed") ? cfg.extra["seed"].get<std::uint64_t>() : 11;
  std::vector<double> bands{8.0, 16.0, 32.0, 64.0};
  if (cfg.extra.contains("bands")) {
    bands.clear();
    for (const auto& b : cfg.extra["bands"]) bands.push_back(b.get<double>());
  }
  Field phi = build_datum(cfg);
  QuadratureScheme q = cfg.solver.quadrature_for(cfg.grid);
  ParaCutoff cut = make_cutoff(M);
  Field f_fx = map_values(derivative(phi), f_shape);

  json rows = json::array();
  std::ofstream csv(out / "paralin.csv");
  csv << "band,residual_ratio,main_ratio\n";
  csv.precision(17);
  for (double band : bands) {
    CounterRng rng(seed + static_cast<std::uint64_t>(band));
    std::vector<cd> spec(cfg.grid.num_points, cd(0.0));
    for (int k = 1; k < cfg.grid.num_points / 2; ++k) {
      double xi = cfg.grid.xi1() * k;
      if (xi < band || xi >= 2.0 * band) continue;
      cd c = cd(rng.normal(2 * k), rng.normal(2 * k + 1));
      spec[cfg.grid.bin_of_mode(k)] = c;
      spec[cfg.grid.bin_of_mode(-k)] = std::conj(c);
    }
    Field v = Field::from_spectrum(cfg.grid, spec);
    double vn = v.l2_norm();
    Field r = paralin_residual(phi, v, q, cut);
    Field main_term =
        apply_Ta(f_fx, apply_multiplier(v, mult_log_abs(cfg.grid)), cut);
    double rr = derivative(r).l2_norm() / vn;
    double mr = derivative(main_term).l2_norm() / vn;
    rows.push_back({{"band", band},
                    {"residual_ratio", rr},
                    {"main_ratio", mr}});
    csv << band << ',' << rr << ',' << mr << '\n';
  }
  json s = envelope(cfg);
  s["M"] = M;
  s["rows"] = rows;
  return s;
}

json run_decay_study(const ExperimentConfig& cfg,
                     const std::filesystem::path& out) {
  double delta = number_or(cfg.extra, "delta", 0.1);
  Field phi0 = build_datum(cfg);
  Trajectory traj = evolve(phi0, cfg.solver);
  if (traj.blew_up) throw numerical_failure("decay-study: run blew up", 0);
  DecayReport rep = decay_report(traj, delta);

  std::ofstream csv(out / "decay.csv");
  csv << "t,Y,sqrt_t_Y\n";
  csv.precision(17);
  for (const auto& r : rep.rows)
    csv << r.t << ',' << r.y << ',' << r.scaled << '\n';

  json s = envelope(cfg);
  s["loglog_slope"] = rep.loglog_slope;
  s["sup_scaled"] = rep.sup_scaled;
  s["monotone_growth"] = rep.monotone_growth;
  s["nonlinear"] = cfg.solver.nonlinear;
  return s;
}

}  // namespace

ExperimentResult run_experiment(const std::filesystem::path& config_path,
                                const std::filesystem::path& out_dir,
                                std::optional<std::uint64_t> seed_override) {
  ExperimentResult result;

  std::ifstream in(config_path);
  if (!in) {
    result.exit_code = kExitConfigError;
    result.error = "cannot open config: " + config_path.string();
    return result;
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line anchor.
    std::ifstream again(config_path);
    std::string text((std::istreambuf_iterator<char>(again)),
                     std::istreambuf_iterator<char>());
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    result.exit_code = kExitConfigError;
    result.error = config_path.string() + ":" + std::to_string(line) + ": " +
                   e.what();
    return result;
  }

  ExperimentConfig cfg;
  try {
    if (seed_override) {
      if (j.contains("datum") && j["datum"].contains("seed"))
        j["datum"]["seed"] = *seed_override;
      if (j.contains("params") && j["params"].contains("seed"))
        j["params"]["seed"] = *seed_override;
    }
    cfg = parse_experiment_config(j);
  } catch (const std::exception& e) {
    result.exit_code = kExitConfigError;
    result.error = config_path.string() + ": " + e.what();
    return result;
  }

  try {
    std::filesystem::create_directories(out_dir);
    json summary;
    if (cfg.kind == "evolve") {
      summary = run_evolve(cfg, out_dir);
    } else if (cfg.kind == "q-constant") {
      summary = run_q_constant(cfg);
    } else if (cfg.kind == "paradiff-probe") {
      summary = run_paradiff_probe(cfg);
    } else if (cfg.kind == "packet-test") {
      summary = run_packet_test(cfg, out_dir);
    } else if (cfg.kind == "scaling-check") {
      summary = run_scaling_check(cfg);
    } else if (cfg.kind == "paralin-check") {
      summary = run_paralin_check(cfg, out_dir);
    } else if (cfg.kind == "decay-study") {
      summary = run_decay_study(cfg, out_dir);
    } else {
      result.exit_code = kExitConfigError;
      result.error = "/kind: unknown experiment kind '" + cfg.kind + "'";
      return result;
    }
    write_json(summary, out_dir / "summary.json");
    result.summary = std::move(summary);
  } catch (const numerical_failure& e) {
    result.exit_code = kExitNumericalFailure;
    result.error = e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitConfigError;
    result.error = e.what();
  }
  return result;
}

}  // namespace sqg
