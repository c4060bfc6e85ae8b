#ifndef SQGFRONT_EVOLUTION_HPP
#define SQGFRONT_EVOLUTION_HPP

#include <utility>

#include "sqgfront/front_operator.hpp"

namespace sqg {

struct SolverConfig {
  double dt = 1e-2;
  double t_final = 1.0;
  int record_stride = 10;  // snapshots every record_stride steps
  // Quadrature for the nonlocal term; zeros mean "derive from the grid"
  // (y_max = L/2, n_y = 4 sqrt(N) rounded to even).
  double y_max = 0.0;
  int n_y = 0;
  double grading = 2.0;
  int oversample = 2;  // dealias factor for the nonlinear term, 1 or 2
  bool nonlinear = true;
  double monitor_s = 3.0;
  double monitor_delta = 0.1;
  double blowup_threshold = 1e6;

  void validate() const;
  QuadratureScheme quadrature_for(GridSpec grid) const;
};

struct MonitorSample {
  double t = 0.0;
  double mass = 0.0;
  double hs = 0.0;
  double y = 0.0;
  double x = 0.0;
  double rhs_norm = 0.0;
  bool x_boundary_warning = false;
};

struct Trajectory {
  std::vector<std::pair<double, Field>> snapshots;
  std::vector<MonitorSample> monitors;
  bool blew_up = false;
  double blowup_time = 0.0;
};

// Exact propagator of the linear flow, symbol e^{2 i xi log|xi| dt}; 1 at
// xi = 0 and on the unpaired Nyquist mode.
FourierMultiplier linear_propagator(GridSpec grid, double dt);

// One integrating-factor RK4 step of d/dt phi = Lin(phi) + NL(phi).
Field step_ifrk4(const Field& phi, double t, const SolverConfig& cfg);

Trajectory evolve(const Field& phi0, const SolverConfig& cfg);

// Discrete int phi^2 dx.
double mass(const Field& phi);

// The symmetry t -> kappa t, x -> kappa (x + log(kappa) t), phi -> kappa phi;
// the returned field lives on a grid with half-length kappa L.
std::pair<double, Field> scaling_transform(double t, const Field& phi,
                                           double kappa);

}  // namespace sqg

#endif
