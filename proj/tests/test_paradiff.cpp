#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqgfront/front_operator.hpp"
#include "sqgfront/paradiff.hpp"
#include "test_helpers.hpp"

using namespace sqg;
constexpr double kPi = std::numbers::pi;

TEST_CASE("cutoff profiles") {
  ParaCutoff c = make_cutoff(8.0);
  CHECK(c.chi(0.0) == 1.0);
  CHECK(c.chi(0.2) == 0.0);
  CHECK(c.chi(1.0 / 20.0) == 1.0);
  CHECK(c.chi(1.0 / 10.0) == 0.0);
  CHECK(c.chi(0.07) > 0.0);
  CHECK(c.chi(0.07) < 1.0);
  CHECK(c.chi(-0.03) == c.chi(0.03));

  CHECK(c.highpass(2.0) == 0.0);  // xi = M/4 sits below M/2
  CHECK(c.highpass(8.0) == 1.0);
  CHECK(c.highpass(6.0) > 0.0);
  CHECK(c.highpass(6.0) < 1.0);

  // chi_tilde = 1 on the region where the ratio argument stays below 1/20.
  for (double t2 : {0.0, 4.0, 16.0, 64.0}) {
    double window = std::sqrt((c.M * c.M + t2 * t2) / 20.0);
    CHECK(c.chi_tilde(0.9 * window, t2) == 1.0);
    CHECK(c.chi_tilde(1.5 * window, t2) < 1.0);
  }
  // With this profile, |theta1| <= M/2 does NOT force chi_tilde = 1 (the
  // ratio reaches 1/4 there); the operator probes below measure the effect.
  CHECK(c.chi_tilde(0.5 * c.M, 0.0) < 1.0);

  CHECK_THROWS_AS(make_cutoff(0.0), std::invalid_argument);
}

TEST_CASE("apply_Ta collapse and support") {
  GridSpec g = make_grid(kPi, 128);
  ParaCutoff c = make_cutoff(8.0);
  Field u = test::random_field(g, 41, 1.0, 0.02);

  // a = 1: T_1 u = P_{>M}^2 u.
  Field ones = Field::from_values(g, [](double) { return 1.0; });
  Field t1 = apply_Ta(ones, u, c);
  std::vector<cd> expect(g.num_points);
  for (int m = 0; m < g.num_points; ++m) {
    double p = c.highpass(g.wavenumber(m));
    expect[m] = p * p * u.spectrum()[m];
  }
  Field ref = Field::from_spectrum(g, expect);
  CHECK(test::rel_l2_error(t1, ref) < 1e-12);

  // Low-frequency input dies on P_{>M}(eta).
  Field low = Field::from_values(g, [](double x) { return std::cos(3.0 * x); });
  Field a = test::gaussian(g, 0.5);
  CHECK(apply_Ta(a, low, c).linf_norm() < 1e-14);

  // Frequency localization: output spectrum vanishes on |xi| <= M/2.
  Field out = apply_Ta(a, u, c);
  for (int m = 0; m < g.num_points; ++m)
    if (std::abs(g.wavenumber(m)) <= 0.5 * c.M)
      CHECK(std::abs(out.spectrum()[m]) < 1e-15);

  // Linearity in u and additivity in a.
  Field u2 = test::random_field(g, 43, 1.0, 0.02);
  Field lin = apply_Ta(a, u + 2.0 * u2, c);
  Field lin_ref = apply_Ta(a, u, c) + 2.0 * apply_Ta(a, u2, c);
  CHECK(test::rel_l2_error(lin, lin_ref) < 1e-12);
  Field a2 = test::gaussian(g, 0.2, 2.0);
  Field add = apply_Ta(a + a2, u, c);
  Field add_ref = apply_Ta(a, u, c) + apply_Ta(a2, u, c);
  CHECK(test::rel_l2_error(add, add_ref) < 1e-12);
}

TEST_CASE("ta_matrix consistency and symmetry") {
  GridSpec g = make_grid(kPi, 64);
  ParaCutoff c = make_cutoff(4.0);

  Field zero = Field::zero(g);
  OperatorMatrix mz = ta_matrix(zero, c);
  double z = 0.0;
  for (const cd& e : mz.entries) z = std::max(z, std::abs(e));
  CHECK(z == 0.0);

  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Field a = test::random_field(g, seed, 0.5, 0.05);
    OperatorMatrix m = ta_matrix(a, c);
    // Hermitian for real a.
    double dev = 0.0;
    for (int r = 0; r < m.dim(); ++r)
      for (int col = 0; col < m.dim(); ++col)
        dev = std::max(dev, std::abs(m.at(r, col) - std::conj(m.at(col, r))));
    CHECK(dev <= 1e-12);

    // Action matches apply_Ta.
    for (std::uint64_t us = 0; us < 2; ++us) {
      Field u = test::random_field(g, 100 + us, 1.0, 0.02);
      Field via_op = apply_Ta(a, u, c);
      std::vector<cd> x(m.dim());
      for (int i = 0; i < m.dim(); ++i) x[i] = u.spectrum()[m.bins[i]];
      std::vector<cd> y = m.apply(x);
      double err = 0.0, scale = 0.0;
      for (int i = 0; i < m.dim(); ++i) {
        err = std::max(err, std::abs(y[i] - via_op.spectrum()[m.bins[i]]));
        scale = std::max(scale, std::abs(y[i]));
      }
      CHECK(err <= 1e-12 * std::max(1.0, scale));
    }

    // Real output for real input.
    Field u = test::random_field(g, 200 + seed, 1.0, 0.02);
    Field out = apply_Ta(a, u, c);
    CHECK(out.finite());
  }
}

TEST_CASE("operator norm") {
  GridSpec g = make_grid(kPi, 128);
  ParaCutoff c = make_cutoff(8.0);

  CHECK(operator_norm(Field::zero(g), c) == 0.0);

  Field ones = Field::from_values(g, [](double) { return 1.0; });
  CHECK(operator_norm(ones, c) == doctest::Approx(1.0).epsilon(1e-7));

  // ||T_a|| <= ||P_{<=M/2} a||_inf + C ||P_{>M/2} a||_inf on smooth symbols.
  Field a = test::gaussian(g, 0.8, 1.0);
  double norm = operator_norm(a, c);
  std::vector<cd> hi(g.num_points), lo(g.num_points);
  for (int m = 0; m < g.num_points; ++m) {
    double p = c.highpass_at(g.wavenumber(m), 0.5 * c.M);
    hi[m] = p * a.spectrum()[m];
    lo[m] = (1.0 - p) * a.spectrum()[m];
  }
  double hi_inf = Field::from_spectrum(g, hi).linf_norm();
  double lo_inf = Field::from_spectrum(g, lo).linf_norm();
  const double C = 5.0;
  CHECK(norm <= lo_inf + C * hi_inf);
  CHECK(norm <= a.linf_norm() + C * hi_inf);
}

TEST_CASE("choose_M") {
  GridSpec g = make_grid(kPi, 128);

  std::vector<Field> zero_sample{Field::zero(g)};
  ChooseMResult r0 = choose_M(1.0, 1.0, 3.0, zero_sample);
  CHECK(r0.success);
  CHECK(r0.M == 1.0);  // smallest dyadic in the search range
  CHECK(r0.achieved_norm == 0.0);

  // Normalized samples at R = 1.
  std::vector<Field> samples;
  for (std::uint64_t s : {11u, 12u}) {
    Field u = test::random_field(g, s, 1.0, 0.1);
    samples.push_back((1.0 / sobolev_norm(u, 3.0)) * u);
  }
  Field gb = test::gaussian(g, 1.0);
  samples.push_back((1.0 / sobolev_norm(gb, 3.0)) * gb);

  for (double r : {1.0, 6.0}) {
    ChooseMResult res = choose_M(1.0, r, 3.0, samples);
    CHECK(res.success);
    CHECK(res.achieved_norm <= 0.95);
    // Probing at 2M does not worsen the achieved norm, up to the Krylov
    // estimator's resolution.
    ParaCutoff c2 = make_cutoff(2.0 * res.M);
    double worst2 = 0.0;
    for (const Field& u : samples) {
      Field a = map_values(
          u, [r](double x) { return 1.0 - std::pow(1.0 - f_shape(x), r); });
      worst2 = std::max(worst2, operator_norm(a, c2));
    }
    CHECK(worst2 <= res.achieved_norm * (1.0 + 1e-3));
  }

  // Precondition violation.
  std::vector<Field> big{test::gaussian(g, 50.0)};
  CHECK_THROWS_AS(choose_M(1.0, 1.0, 3.0, big), std::invalid_argument);
}

TEST_CASE("modified energy") {
  GridSpec g = make_grid(kPi, 128);
  ParaCutoff c = make_cutoff(4.0);
  double s = 3.0;

  CHECK(modified_energy(test::gaussian(g, 0.4), Field::zero(g), s, c) == 0.0);

  // phi = 0 collapses to the pure symbol form.
  Field v = test::random_field(g, 71, 1.0, 0.02);
  double got = modified_energy(Field::zero(g), v, s, c);
  double expect = 0.0;
  for (int m = 0; m < g.num_points; ++m) {
    double xi = g.wavenumber(m);
    double p = c.highpass(xi);
    double w = std::pow(std::abs(xi), 2.0 * s) + 1.0;
    expect += w * std::pow(p, 6.0) * std::norm(v.spectrum()[m]);
  }
  expect *= 2.0 * g.half_length;
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));

  // Nonnegative and comparable to H^s on P_{>M}-dominated fields.
  Field phi = test::gaussian(g, 0.4);
  double c_low = 1e300, c_high = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Field w = test::band_noise(g, 16.0, 300 + seed);
    double e = modified_energy(phi, w, s, c);
    CHECK(e >= -1e-12);
    double hs = sobolev_norm(w, s);
    std::vector<cd> proj(g.num_points);
    for (int m = 0; m < g.num_points; ++m)
      proj[m] = c.highpass(g.wavenumber(m)) * w.spectrum()[m];
    double hs_hi = sobolev_norm(Field::from_spectrum(g, proj), s);
    c_high = std::max(c_high, e / (hs * hs));
    c_low = std::min(c_low, e / (hs_hi * hs_hi));
  }
  CHECK(c_high / c_low <= 10.0);
}
