#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqgfront/fft.hpp"
#include "sqgfront/spectral.hpp"
#include "test_helpers.hpp"

using namespace sqg;
constexpr double kPi = std::numbers::pi;

TEST_CASE("make_grid examples and validation") {
  GridSpec g = make_grid(kPi, 16);
  CHECK(g.xi1() == doctest::Approx(1.0));
  // Wavenumbers are the integers -8..7.
  CHECK(g.wavenumber(g.bin_of_mode(3)) == doctest::Approx(3.0));
  CHECK(g.wavenumber(g.bin_of_mode(-8)) == doctest::Approx(-8.0));

  GridSpec g2 = make_grid(2.0 * kPi, 32);
  CHECK(g2.dx() == doctest::Approx(kPi / 8.0));
  CHECK(g2.xi1() == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_grid(kPi, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(kPi, 24), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(kPi, 8), std::invalid_argument);

  // Points strictly increasing with constant spacing.
  for (int j = 1; j < g.num_points; ++j)
    CHECK(g.point(j) - g.point(j - 1) == doctest::Approx(g.dx()));
}

TEST_CASE("transform round-trip") {
  GridSpec g = make_grid(11.0, 64);
  Field f = test::random_field(g, 7);
  Field back = Field::from_spectrum(g, f.spectrum());
  CHECK(test::rel_l2_error(back, f) < 1e-12);
}

TEST_CASE("apply_multiplier examples") {
  GridSpec g = make_grid(kPi, 64);
  Field f = test::random_field(g, 3);

  Field id = apply_multiplier(f, mult_identity(g));
  CHECK(test::rel_l2_error(id, f) < 1e-13);

  Field c = Field::from_values(g, [](double x) { return std::cos(x); });
  Field lc = apply_multiplier(c, mult_log_abs(g));
  CHECK(lc.linf_norm() < 1e-13);  // log 1 = 0

  // 2 log|D| d/dx on cos(2x) = -4 log 2 sin(2x).
  Field c2 = Field::from_values(g, [](double x) { return std::cos(2.0 * x); });
  Field out = apply_multiplier(c2, mult_log_derivative(g));
  Field expect = Field::from_values(g, [](double x) {
    return -4.0 * std::log(2.0) * std::sin(2.0 * x);
  });
  CHECK(test::rel_l2_error(out, expect) < 1e-12);
}

TEST_CASE("reality preservation of Hermitian-compatible multipliers") {
  GridSpec g = make_grid(5.0, 128);
  Field f = test::random_field(g, 11);
  Field out = apply_multiplier(f, mult_log_derivative(g));
  // The imaginary residue is measured on the raw inverse transform.
  std::vector<cd> spec(out.grid().num_points);
  const auto& sym = mult_log_derivative(g).symbol;
  for (int m = 0; m < g.num_points; ++m) spec[m] = sym[m] * f.spectrum()[m];
  auto vals = fft::inverse(spec);
  double imag = 0.0, norm = 0.0;
  for (const cd& v : vals) {
    imag += v.imag() * v.imag();
    norm += std::norm(v);
  }
  CHECK(std::sqrt(imag) < 1e-12 * std::sqrt(norm) + 1e-300);
}

TEST_CASE("spectral_shift examples and inverse") {
  GridSpec g = make_grid(kPi, 64);
  Field s = Field::from_values(g, [](double x) { return std::sin(x); });

  Field same = spectral_shift(s, 0.0);
  CHECK(test::rel_l2_error(same, s) < 1e-14);

  Field shifted = spectral_shift(s, kPi / 2.0);
  Field cosx = Field::from_values(g, [](double x) { return std::cos(x); });
  CHECK((shifted - cosx).linf_norm() < 1e-12);

  Field full = spectral_shift(s, 2.0 * g.half_length);
  CHECK((full - s).linf_norm() < 1e-12);

  Field f = test::random_field(g, 21);
  Field round = spectral_shift(spectral_shift(f, 0.37), -0.37);
  CHECK(test::rel_l2_error(round, f) < 1e-12);
}

TEST_CASE("littlewood-paley bands") {
  GridSpec g = make_grid(kPi, 128);
  Field mode4 = Field::from_values(g, [](double x) { return std::cos(4.0 * x); });

  Field p4 = lp_project(mode4, 4.0);
  CHECK(test::rel_l2_error(p4, mode4) < 1e-12);

  bool flag = false;
  Field p64 = lp_project(mode4, 64.0, &flag);
  CHECK(p64.l2_norm() < 1e-13);
  CHECK_FALSE(flag);

  lp_project(mode4, 128.0, &flag);
  CHECK(flag);  // above Nyquist

  // Partition of unity: sum of bands plus the mean reproduces f.
  Field f = test::random_field(g, 5);
  Field sum = Field::from_values(g, [&](double) { return f.mean(); });
  for (double l : dyadic_bands(g)) sum = sum + lp_project(f, l);
  CHECK(test::rel_l2_error(sum, f) < 1e-10);
}

TEST_CASE("sobolev norm examples") {
  GridSpec g = make_grid(kPi, 64);
  CHECK(sobolev_norm(Field::zero(g), 2.0) == 0.0);

  Field c = Field::from_values(g, [](double x) { return std::cos(x); });
  CHECK(sobolev_norm(c, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  for (double s : {0.5, 1.0, 3.0})
    CHECK(sobolev_norm(c, s) ==
          doctest::Approx(std::pow(2.0, s / 2.0) * std::sqrt(kPi)).epsilon(1e-12));

  // Monotone in s for fixed f.
  Field f = test::random_field(g, 9);
  double prev = sobolev_norm(f, -2.0);
  for (double s = -1.5; s <= 4.0; s += 0.5) {
    double cur = sobolev_norm(f, s);
    CHECK(cur >= prev * (1.0 - 1e-12));
    prev = cur;
  }
}

TEST_CASE("y norm examples") {
  GridSpec g = make_grid(kPi, 64);
  CHECK(y_norm(Field::zero(g), 0.1) == 0.0);

  Field c = Field::from_values(g, [](double x) { return std::cos(x); });
  CHECK(y_norm(c, 0.1) == doctest::Approx(2.0).epsilon(1e-12));

  Field c2 = Field::from_values(g, [](double x) { return std::cos(2.0 * x); });
  double expect = std::pow(2.0, 0.65) + std::pow(2.0, 2.1);
  CHECK(y_norm(c2, 0.1) == doctest::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS(y_norm(c, 0.3), std::invalid_argument);
}

TEST_CASE("x norm at t = 0 against quadrature") {
  GridSpec g = make_grid(32.0 * kPi, 512);
  Field f = test::gaussian(g, 1.0, 1.0);
  XNormResult r = x_norm(f, 0.0, 0.0);
  CHECK_FALSE(r.boundary_warning);

  // Direct quadrature oracle: ||f||_{L^2} + ||x f'||_{L^2} for the Gaussian.
  // f = e^{-x^2}: ||f|| = (pi/2)^{1/4}, ||x f'|| = 2 ||x^2 e^{-x^2}||.
  double nf = std::pow(kPi / 2.0, 0.25);
  double dx = g.dx();
  double acc = 0.0;
  for (int j = 0; j < g.num_points; ++j) {
    double x = g.point(j);
    double fp = -2.0 * x * std::exp(-x * x);
    acc += x * x * fp * fp * dx;
  }
  double oracle = nf + std::sqrt(acc);
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));

  CHECK(x_norm(Field::zero(g), 0.0, 0.0).value == 0.0);
}

TEST_CASE("frequency envelope") {
  GridSpec g = make_grid(kPi, 128);
  double s = 1.5, de = 0.25;

  Field zero = Field::zero(g);
  FrequencyEnvelope env0 = frequency_envelope(zero, s, de);
  for (double v : env0.values) CHECK(v <= 1e-200);

  // Single dyadic mode: envelope is the two-sided geometric decay.
  Field mode8 = Field::from_values(g, [](double x) { return std::cos(8.0 * x); });
  FrequencyEnvelope env = frequency_envelope(mode8, s, de);
  double hs = sobolev_norm(mode8, s);
  int k0 = -1;
  for (std::size_t i = 0; i < env.lambdas.size(); ++i)
    if (env.lambdas[i] == 8.0) k0 = static_cast<int>(i);
  REQUIRE(k0 >= 0);
  for (std::size_t i = 0; i < env.lambdas.size(); ++i) {
    double expect = std::pow(2.0, -de * std::abs(static_cast<int>(i) - k0)) * hs;
    CHECK(env.values[i] == doctest::Approx(expect).epsilon(1e-10));
  }

  // Domination and the slowly-varying inequality for random data.
  Field f = test::random_field(g, 13);
  FrequencyEnvelope e2 = frequency_envelope(f, s, de);
  for (std::size_t k = 0; k < e2.lambdas.size(); ++k) {
    CHECK(sobolev_norm(lp_project(f, e2.lambdas[k]), s) <=
          e2.values[k] * (1.0 + 1e-12));
    for (std::size_t j = 0; j < e2.lambdas.size(); ++j) {
      double bound = std::pow(2.0, de * std::abs(static_cast<double>(j) -
                                                 static_cast<double>(k)));
      CHECK(e2.values[j] / e2.values[k] <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("resample keeps band-limited data") {
  GridSpec g = make_grid(4.0, 64);
  Field f = test::random_field(g, 3);
  Field up = resample(f, 128);
  Field down = resample(up, 64);
  CHECK(test::rel_l2_error(down, f) < 1e-12);
  // Upsampled field interpolates the original at the coarse points.
  for (int j = 0; j < 64; ++j)
    CHECK(up.values()[2 * j] == doctest::Approx(f.values()[j]).epsilon(1e-10));
}
