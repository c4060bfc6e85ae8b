#ifndef SQGFRONT_SPECTRAL_HPP
#define SQGFRONT_SPECTRAL_HPP

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqg {

using cd = std::complex<double>;

// Raised when an adaptive or iterative numerical procedure fails to converge.
class numerical_failure : public std::runtime_error {
 public:
  numerical_failure(const std::string& what, double last_value)
      : std::runtime_error(what), last_value(last_value) {}
  double last_value;
};

// Periodic grid on [-L, L) with N (power of two) points and wavenumbers
// xi_k = (pi/L) k, k in [-N/2, N/2).
struct GridSpec {
  double half_length = 0.0;
  int num_points = 0;

  double dx() const { return 2.0 * half_length / num_points; }
  double xi1() const;  // wavenumber spacing pi/L
  double point(int j) const { return -half_length + j * dx(); }
  double nyquist() const { return xi1() * (num_points / 2); }
  int nyquist_bin() const { return num_points / 2; }
  // Wavenumber held by FFT bin m (bin N/2 is the unpaired Nyquist mode).
  double wavenumber(int m) const;
  int mode_of_bin(int m) const {
    return m < num_points / 2 ? m : m - num_points;
  }
  int bin_of_mode(int k) const { return k >= 0 ? k : k + num_points; }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(double half_length, int num_points);

// Real scalar function on a grid with a lazily cached spectrum. Immutable
// after construction; the cache fills under a once-flag, so sharing across
// threads is safe.
class Field {
 public:
  Field() = default;
  Field(GridSpec grid, std::vector<double> values);
  static Field zero(GridSpec grid);
  static Field from_values(GridSpec grid, const std::function<double(double)>& f);
  // Inverse-transforms series coefficients (FFT bin order); the imaginary
  // residue must be small relative to the field size.
  static Field from_spectrum(GridSpec grid, const std::vector<cd>& coeffs);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<cd>& spectrum() const;
  int size() const { return static_cast<int>(values_.size()); }

  double mean() const;
  double l2_norm() const;    // continuum-normalized: sqrt(sum v^2 dx)
  double linf_norm() const;
  bool finite() const;

 private:
  struct Cache;
  GridSpec grid_;
  std::vector<double> values_;
  std::shared_ptr<Cache> cache_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
// Pointwise lift of a scalar function.
Field map_values(const Field& a, const std::function<double(double)>& f);
double inner_product(const Field& a, const Field& b);  // int a b dx

// Symbol samples on a grid, one per wavenumber bin.
struct FourierMultiplier {
  GridSpec grid;
  std::string name;
  std::vector<cd> symbol;
};

// Builds symbol samples from xi -> m(xi). Singular symbols must give their
// xi = 0 value through `at_zero`. Odd symbols get the unpaired Nyquist mode
// zeroed; even ones keep it.
FourierMultiplier make_multiplier(GridSpec grid, const std::string& name,
                                  const std::function<cd(double)>& symbol,
                                  cd at_zero, bool odd_symbol);

FourierMultiplier mult_identity(GridSpec grid);
FourierMultiplier mult_derivative(GridSpec grid);         // i xi
FourierMultiplier mult_log_abs(GridSpec grid);            // log|xi|, 0 at 0
FourierMultiplier mult_abs_power(GridSpec grid, double a);  // |xi|^a, 0 at 0
FourierMultiplier mult_log_derivative(GridSpec grid);     // 2 i xi log|xi|

Field apply_multiplier(const Field& f, const FourierMultiplier& m);
Field spectral_shift(const Field& f, double y);  // f(. + y)
Field derivative(const Field& f);

// --- Littlewood-Paley ---

// p_lambda(xi) = theta(|xi|/lambda) - theta(2|xi|/lambda), built from the
// bump-template step; the family telescopes to 1 on every nonzero mode.
double lp_band_symbol(double xi, double lambda);
// Dyadic band centers covering all nonzero grid modes.
std::vector<double> dyadic_bands(GridSpec grid);
Field lp_project(const Field& f, double lambda, bool* above_nyquist = nullptr);

// --- Norms ---

double sobolev_norm(const Field& f, double s);
double y_norm(const Field& f, double delta);

struct XNormResult {
  double value = 0.0;
  double boundary_mass_fraction = 0.0;
  bool boundary_warning = false;
};
// ||f||_{H^s} + ||(x + 2t) f_x + 2t log|D| f_x||_{L^2} with x the centered
// sawtooth coordinate; warns when >1% of the L^2 mass sits in |x| > 0.9 L.
XNormResult x_norm(const Field& f, double t, double s);

// --- Frequency envelopes ---

struct FrequencyEnvelope {
  std::vector<double> lambdas;
  std::vector<double> values;
  double delta_env = 0.0;
};

FrequencyEnvelope frequency_envelope(const Field& f, double s, double delta_env);

// --- Complex helpers (wave packets, test instrumentation) ---

std::vector<cd> complex_spectrum(GridSpec grid, const std::vector<cd>& values);
std::vector<cd> complex_shift(GridSpec grid, const std::vector<cd>& values, double y);
std::vector<cd> complex_lp_project(GridSpec grid, const std::vector<cd>& values,
                                   double lambda);

// Band-limited resampling between two grids with the same half-length.
Field resample(const Field& f, int new_num_points);

}  // namespace sqg

#endif
