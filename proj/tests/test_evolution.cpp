#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqgfront/evolution.hpp"
#include "test_helpers.hpp"

using namespace sqg;
constexpr double kPi = std::numbers::pi;

TEST_CASE("linear propagator") {
  GridSpec g = make_grid(16.0 * kPi, 256);
  FourierMultiplier id = linear_propagator(g, 0.0);
  FourierMultiplier e = linear_propagator(g, 0.7);
  for (int m = 0; m < g.num_points; ++m) {
    CHECK(std::abs(id.symbol[m] - cd(1.0)) < 1e-15);
    CHECK(std::abs(std::abs(e.symbol[m]) - 1.0) < 1e-14);
  }
  // The xi = 1 mode is stationary.
  int bin1 = g.bin_of_mode(16);  // xi = 16/16 = 1
  CHECK(g.wavenumber(bin1) == doctest::Approx(1.0));
  CHECK(std::abs(e.symbol[bin1] - cd(1.0)) < 1e-14);
}

TEST_CASE("linear-only stepping is the exact propagator") {
  GridSpec g = make_grid(16.0 * kPi, 256);
  Field f = test::random_field(g, 5);
  SolverConfig cfg;
  cfg.dt = 0.37;
  cfg.t_final = 0.37;
  cfg.nonlinear = false;
  Field one_step = step_ifrk4(f, 0.0, cfg);
  Field exact = apply_multiplier(f, linear_propagator(g, cfg.dt));
  CHECK(test::rel_l2_error(one_step, exact) < 1e-13);
  // L^2 preserved exactly by unit-modulus stepping.
  CHECK(one_step.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-13));

  Field z = step_ifrk4(Field::zero(g), 0.0, cfg);
  CHECK(z.linf_norm() == 0.0);
}

TEST_CASE("linear evolution of cos(2x) matches the closed form") {
  GridSpec g = make_grid(kPi, 64);
  Field c2 = Field::from_values(g, [](double x) { return std::cos(2.0 * x); });
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 1.0;
  cfg.nonlinear = false;
  Trajectory traj = evolve(c2, cfg);
  const Field& at1 = traj.snapshots.back().second;
  // Modes +-2 rotate with phase e^{+-i 4 log 2 t}.
  Field expect = Field::from_values(g, [](double x) {
    return std::cos(2.0 * x + 4.0 * std::log(2.0) * 1.0);
  });
  CHECK(test::rel_l2_error(at1, expect) < 1e-10);
}

TEST_CASE("evolve basics") {
  GridSpec g = make_grid(16.0 * kPi, 128);
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 0.5;
  Trajectory z = evolve(Field::zero(g), cfg);
  CHECK_FALSE(z.blew_up);
  for (const auto& m : z.monitors) {
    CHECK(m.mass == 0.0);
    CHECK(m.hs == 0.0);
  }
  // Times strictly increase and the monitor covers every step.
  CHECK(z.monitors.size() == static_cast<std::size_t>(0.5 / 0.05) + 1);
  for (std::size_t i = 1; i < z.monitors.size(); ++i)
    CHECK(z.monitors[i].t > z.monitors[i - 1].t);

  SolverConfig bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(evolve(Field::zero(g), bad), std::invalid_argument);
}

TEST_CASE("mass examples") {
  GridSpec g = make_grid(kPi, 64);
  CHECK(mass(Field::zero(g)) == 0.0);
  Field c = Field::from_values(g, [](double x) { return std::cos(x); });
  CHECK(mass(c) == doctest::Approx(kPi).epsilon(1e-12));
  Field f = test::random_field(g, 9);
  CHECK(mass(spectral_shift(f, 0.61)) == doctest::Approx(mass(f)).epsilon(1e-12));
}

TEST_CASE("short nonlinear run conserves mass") {
  GridSpec g = make_grid(32.0 * kPi, 512);
  Field phi0 = test::gaussian(g, 0.1);
  SolverConfig cfg;
  cfg.dt = 0.02;
  cfg.t_final = 1.0;
  Trajectory traj = evolve(phi0, cfg);
  REQUIRE_FALSE(traj.blew_up);
  double m0 = traj.monitors.front().mass;
  for (const auto& m : traj.monitors)
    CHECK(std::abs(m.mass - m0) / m0 < 1e-8);
}

TEST_CASE("temporal order of the integrating-factor scheme") {
  GridSpec g = make_grid(16.0 * kPi, 256);
  Field phi0 = test::gaussian(g, 0.5);
  auto run = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 0.4;
    cfg.record_stride = 1 << 20;
    return evolve(phi0, cfg).snapshots.back().second;
  };
  Field a = run(0.05), b = run(0.025), c = run(0.0125);
  double e1 = (a - b).l2_norm(), e2 = (b - c).l2_norm();
  double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("time reversal mirrors reflected data") {
  // x -> -x alone is not a symmetry of the flow (the dispersion is an odd
  // function of frequency); reflecting both x and t is. One step forward on
  // phi(-x) equals the reflection of one step backward on phi.
  GridSpec g = make_grid(16.0 * kPi, 256);
  Field phi = test::gaussian(g, 0.3, 1.0, 2.5);
  Field mirrored = Field::from_values(g, [&](double) { return 0.0; });
  {
    std::vector<double> mv(g.num_points);
    for (int j = 0; j < g.num_points; ++j)
      mv[j] = phi.values()[(g.num_points - j) % g.num_points];
    mirrored = Field(g, std::move(mv));
  }
  SolverConfig fwd;
  fwd.dt = 0.02;
  fwd.t_final = 0.02;
  SolverConfig bwd = fwd;
  bwd.dt = -0.02;
  Field a = step_ifrk4(mirrored, 0.0, fwd);
  Field b = step_ifrk4(phi, 0.0, bwd);
  double dev = 0.0;
  for (int j = 0; j < g.num_points; ++j) {
    double refl = b.values()[(g.num_points - j) % g.num_points];
    dev = std::max(dev, std::abs(a.values()[j] - refl));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("scaling transform") {
  GridSpec g = make_grid(16.0 * kPi, 256);
  Field phi = test::gaussian(g, 0.3);

  auto [t1, same] = scaling_transform(0.7, phi, 1.0);
  CHECK(t1 == doctest::Approx(0.7));
  CHECK(test::rel_l2_error(same, phi) < 1e-13);

  // t = 0: pure dilation.
  auto [t2, dil] = scaling_transform(0.0, phi, 2.0);
  CHECK(t2 == 0.0);
  CHECK(dil.grid().half_length == doctest::Approx(32.0 * kPi));
  for (int j = 0; j < dil.size(); ++j) {
    double x = dil.grid().point(j);
    CHECK(dil.values()[j] ==
          doctest::Approx(2.0 * 0.3 * std::exp(-x * x / 4.0)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(scaling_transform(0.0, phi, -1.0), std::invalid_argument);
}

TEST_CASE("scaling symmetry of the discrete flow") {
  GridSpec g = make_grid(16.0 * kPi, 256);
  Field phi0 = test::gaussian(g, 0.05);
  double T = 0.5, kappa = 2.0;

  SolverConfig base;
  base.dt = 0.01;
  base.t_final = T;
  base.record_stride = 1 << 20;
  Trajectory tb = evolve(phi0, base);
  auto [tA, viaA] = scaling_transform(T, tb.snapshots.back().second, kappa);

  auto [z, psi0] = scaling_transform(0.0, phi0, kappa);
  SolverConfig scaled = base;
  scaled.dt = kappa * base.dt;
  scaled.t_final = kappa * T;
  Trajectory ts = evolve(psi0, scaled);
  const Field& viaB = ts.snapshots.back().second;

  CHECK(tA == doctest::Approx(kappa * T));
  CHECK(test::rel_l2_error(viaB, viaA) < 1e-4);
}
