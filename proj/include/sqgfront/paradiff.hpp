#ifndef SQGFRONT_PARADIFF_HPP
#define SQGFRONT_PARADIFF_HPP

#include <utility>

#include "sqgfront/spectral.hpp"

namespace sqg {

// M-dependent quantization data. chi is the even plateau profile that is 1 on
// [-1/20, 1/20] and 0 outside [-1/10, 1/10]; the operator cutoff applies it to
// the ratio |xi-eta|^2 / (M^2 + |xi+eta|^2). highpass is the P_{>M} symbol,
// 0 below M/2 and 1 above M.
struct ParaCutoff {
  double M = 0.0;
  double chi(double theta) const;
  double chi_tilde(double theta1, double theta2) const;
  double highpass(double xi) const;        // P_{>M}
  double highpass_at(double xi, double level) const;  // P_{>level}
};

ParaCutoff make_cutoff(double M);

// Discrete realization of the quantization: dense double sum over retained
// wavenumber pairs. a must be real-valued (the eta-independent case).
Field apply_Ta(const Field& a, const Field& u, const ParaCutoff& c);

struct OperatorMatrix {
  GridSpec grid;
  std::vector<int> bins;     // retained FFT bins (P_{>M} support)
  std::vector<cd> entries;   // row-major, dim x dim
  std::string tag;
  int dim() const { return static_cast<int>(bins.size()); }
  const cd& at(int r, int c) const { return entries[r * bins.size() + c]; }
  std::vector<cd> apply(const std::vector<cd>& x) const;
  std::vector<cd> apply_adjoint(const std::vector<cd>& x) const;
};

// Dense materialization of T_a on the retained modes (memory guard N <= 4096).
OperatorMatrix ta_matrix(const Field& a, const ParaCutoff& c);

// Largest singular value by power iteration on A*A; relative tolerance 1e-8,
// at most 1000 iterations, else numerical_failure carrying the last iterate.
double operator_norm(const Field& a, const ParaCutoff& c);
double operator_norm(const OperatorMatrix& m);

struct ChooseMResult {
  bool success = false;
  double M = 0.0;
  double achieved_norm = 0.0;
  double margin = 0.0;
  std::vector<std::pair<double, double>> trace;  // (M, max norm over samples)
};

// Smallest dyadic M with ||T_{1-(1-F(u))^r}|| <= 1 - margin for every sample.
ChooseMResult choose_M(double R, double r, double s,
                       const std::vector<Field>& samples, double margin = 0.05);

// E^s(v) = E^(s)(v) + E^(0)(v) with E^(s) = int g T_{1-F(phi_x)} g,
// g = T_{(1-F(phi_x))^s} |D|^s v.
double modified_energy(const Field& phi, const Field& v, double s,
                       const ParaCutoff& c);

}  // namespace sqg

#endif
