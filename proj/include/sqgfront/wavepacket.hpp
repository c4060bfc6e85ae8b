#ifndef SQGFRONT_WAVEPACKET_HPP
#define SQGFRONT_WAVEPACKET_HPP

#include "sqgfront/evolution.hpp"

namespace sqg {

// Dispersion relation a(xi) = -2 xi log|xi| of the linearized flow.
double dispersion_a(double xi);
double dispersion_a_prime(double xi);   // group velocity, -2 - 2 log|xi|
double dispersion_a_second(double xi);  // -2 / xi
// Frequency riding at group velocity v: xi_v = -e^{-1 - v/2}.
double group_frequency(double v);
// Phase phi(v) = v xi_v - a(xi_v); equals -2 xi_v.
double dispersion_phase(double v);

struct DispersionPoint {
  double v = 0.0;
  double xi_v = 0.0;
  double a_value = 0.0;
  double a_second = 0.0;
  double phase = 0.0;
};

DispersionPoint dispersion_point(double v);

// Velocity interval J_lambda = a'(I_lambda) for the dyadic annulus
// I_lambda = {lambda <= |xi| < 2 lambda} on the negative frequency axis.
struct VelocityBand {
  double lambda = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  std::vector<double> sample(int count) const;
  bool contains(double v) const { return v >= v_min && v <= v_max; }
};

VelocityBand velocity_band(double lambda);

// u^v = a''(xi_v)^{-1/2} chi(y) e^{i t phi(x/t)} with envelope coordinate
// y = (x - v t) / (t^{1/2} a''(xi_v)^{1/2}); chi is the bump template
// normalized to unit mass on the grid.
struct WavePacket {
  double v = 0.0;
  double t = 0.0;
  double xi_v = 0.0;
  double width = 0.0;
  double lambda = 0.0;
  GridSpec grid;
  std::vector<cd> values;
};

WavePacket build_packet(double v, double t, GridSpec grid);

// One extraction row: gamma(t, v) = <phi_lambda, u^v> with conjugate pairing.
struct ProfileRow {
  double t = 0.0;
  double lambda = 0.0;
  std::vector<double> velocities;
  std::vector<cd> gamma;
  std::vector<bool> admissible;  // (t, v) in the region t >= 8/lambda, v in J
};

ProfileRow gamma_profile(const Field& phi, double t, double lambda,
                         const std::vector<double>& velocities);

struct ProfileRecord {
  double lambda = 0.0;
  std::vector<ProfileRow> rows;
};

// Q(phi) = (1/3) int sgn(y) |delta^y phi|^2 delta^y phi dy.
Field cubic_Q(const Field& phi, const QuadratureScheme& q);
std::vector<cd> cubic_Q_complex(GridSpec grid, const std::vector<cd>& values,
                                const QuadratureScheme& q);

// q(xi) = (1/3) int sgn(y) |b|^2 b dy, b = (e^{i y xi} - 1)/y, integrated to
// |y| = 1e4/|xi| with an analytic mean-tail correction; two tail lengths are
// compared and disagreement raises numerical_failure.
cd q_constant(double xi);

struct ScatteringFitRow {
  double v = 0.0;
  cd W = 0.0;
  double q_used = 0.0;      // Re q(xi_v)
  double slope_fit = 0.0;   // d(arg gamma)/d(ln t), least squares
  double slope_pred = 0.0;  // q(xi_v) xi_v |W|^2
  double residual = 0.0;
};

struct ScatteringFit {
  std::vector<ScatteringFitRow> rows;
  double t_first = 0.0;
  double t_last = 0.0;
};

// Fits |W| = mean|gamma| and the phase slope against ln t over the last
// geometric decade of the record.
ScatteringFit fit_scattering(const ProfileRecord& rec);

struct DecayRow {
  double t = 0.0;
  double y = 0.0;
  double scaled = 0.0;  // sqrt(t) * y
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double loglog_slope = 0.0;  // of log ||phi||_Y vs log t, last decade
  double sup_scaled = 0.0;    // sup over t >= 1
  bool monotone_growth = false;
};

DecayReport decay_report(const Trajectory& traj, double delta);

}  // namespace sqg

#endif
