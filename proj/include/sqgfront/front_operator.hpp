#ifndef SQGFRONT_FRONT_OPERATOR_HPP
#define SQGFRONT_FRONT_OPERATOR_HPP

#include "sqgfront/paradiff.hpp"
#include "sqgfront/spectral.hpp"

namespace sqg {

// Shape function F(s) = 1 - 1/sqrt(1+s^2); vanishes to second order at 0.
double f_shape(double s);
double f_shape_deriv(double s);

// Symmetric graded quadrature in the shift variable y: nodes
// +-Y_max (j / (N_y/2))^g, j = 1..N_y/2, with composite weights that sum to
// 2 Y_max exactly. Never contains y = 0.
struct QuadratureScheme {
  std::vector<double> nodes;    // signed, symmetric about 0
  std::vector<double> weights;  // positive, equal for +-y pairs
  double y_max = 0.0;
  double grading = 1.0;
  int node_count() const { return static_cast<int>(nodes.size()); }
};

QuadratureScheme make_quadrature(double y_max, int n_y, double grading);

// (f(x+y) - f(x)) / y, or / |y| when absolute is set. Shifts are spectral.
Field diff_quotient(const Field& f, double y, bool absolute);

// (A_phi v)(x) = int F(delta^y phi) |delta|^y v dy over the scheme.
Field apply_A(const Field& phi, const Field& v, const QuadratureScheme& q);

// c0 = <pv |y|^{-1}, e^{-iy}> by the epsilon-limit definition with a
// Richardson-extrapolated epsilon schedule.
struct PvConstant {
  double value = 0.0;
  std::vector<double> epsilons;
  int richardson_order = 2;
};

PvConstant pv_unit_constant();

// B^0(phi) = <pv|y|^{-1}, F(delta^y phi)> - F(phi_x) c0, the first pairing
// computed by the split-at-|y|=1 definition.
Field b0_symbol(const Field& phi, const QuadratureScheme& q);

// Nonlinear term A_phi(phi_x), optionally evaluated on an oversampled grid
// (factor 1 or 2) and truncated back.
Field nonlinear_term(const Field& phi, const QuadratureScheme& q,
                     int oversample = 1);

// Full right-hand side d/dt phi = A_phi phi_x + 2 log|D| phi_x.
Field rhs(const Field& phi, const QuadratureScheme& q, int oversample = 1);

// R = A_phi v - T_{B^0(phi)} v + 2 T_{F(phi_x)} log|D| v.
Field paralin_residual(const Field& phi, const Field& v,
                       const QuadratureScheme& q, const ParaCutoff& c);

}  // namespace sqg

#endif
