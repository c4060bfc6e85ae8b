#ifndef SQGFRONT_BUMPS_HPP
#define SQGFRONT_BUMPS_HPP

namespace sqg {

// The single smooth template every cutoff in the library is built from:
// psi(r) = exp(1 - 1/(1 - r^2)) on (-1, 1), zero outside. psi(0) = 1.
double bump_template(double r);

// Monotone C-infinity step: 0 for s <= 0, 1 for s >= 1, in between the
// normalized cumulative integral of the template, int_{-1}^{2s-1} psi / int psi.
double smooth_step01(double s);

// Step rising from 0 at x=a to 1 at x=b (a < b).
double smooth_step(double x, double a, double b);

// Even plateau cutoff: 1 on |x| <= inner, 0 on |x| >= outer.
double plateau_cutoff(double x, double inner, double outer);

// int_{-1}^{1} psi(r) dr, fixed high-order value used for normalizations.
double bump_template_mass();

}  // namespace sqg

#endif
