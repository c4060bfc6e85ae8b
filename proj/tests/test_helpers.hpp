#ifndef SQGFRONT_TEST_HELPERS_HPP
#define SQGFRONT_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

#include "sqgfront/rng.hpp"
#include "sqgfront/spectral.hpp"

namespace sqg::test {

inline Field gaussian(GridSpec g, double amp = 1.0, double sigma = 1.0,
                      double x0 = 0.0) {
  return Field::from_values(g, [=](double x) {
    double u = (x - x0) / sigma;
    return amp * std::exp(-u * u);
  });
}

// Random real field with Gaussian mode amplitudes, zero mean.
inline Field random_field(GridSpec g, std::uint64_t seed, double amp = 1.0,
                          double decay = 1.0) {
  CounterRng rng(seed);
  std::vector<cd> spec(g.num_points, cd(0.0));
  for (int k = 1; k < g.num_points / 2; ++k) {
    double xi = g.xi1() * k;
    double mag = amp * std::exp(-decay * xi * xi);
    cd c = mag * cd(rng.normal(2 * k), rng.normal(2 * k + 1));
    spec[g.bin_of_mode(k)] = c;
    spec[g.bin_of_mode(-k)] = std::conj(c);
  }
  return Field::from_spectrum(g, spec);
}

// Real noise supported on the dyadic annulus [lambda, 2 lambda).
inline Field band_noise(GridSpec g, double lambda, std::uint64_t seed,
                        double amp = 1.0) {
  CounterRng rng(seed);
  std::vector<cd> spec(g.num_points, cd(0.0));
  for (int k = 1; k < g.num_points / 2; ++k) {
    double xi = g.xi1() * k;
    if (xi < lambda || xi >= 2.0 * lambda) continue;
    cd c = amp * cd(rng.normal(2 * k), rng.normal(2 * k + 1));
    spec[g.bin_of_mode(k)] = c;
    spec[g.bin_of_mode(-k)] = std::conj(c);
  }
  return Field::from_spectrum(g, spec);
}

inline double rel_l2_error(const Field& a, const Field& b) {
  double num = (a - b).l2_norm();
  double den = b.l2_norm();
  return den > 0.0 ? num / den : num;
}

}  // namespace sqg::test

#endif
