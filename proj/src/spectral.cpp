#include "sqgfront/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "sqgfront/bumps.hpp"
#include "sqgfront/fft.hpp"

namespace sqg {

namespace {
constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* op) {
  if (!(a == b))
    throw std::invalid_argument(std::string(op) + ": grid mismatch");
}
}  // namespace

double GridSpec::xi1() const { return kPi / half_length; }

double GridSpec::wavenumber(int m) const { return xi1() * mode_of_bin(m); }

GridSpec make_grid(double half_length, int num_points) {
  if (!(half_length > 0.0))
    throw std::invalid_argument("make_grid: half_length must be positive");
  if (!is_power_of_two(num_points) || num_points < 16)
    throw std::invalid_argument(
        "make_grid: num_points must be a power of two >= 16");
  return GridSpec{half_length, num_points};
}

struct Field::Cache {
  std::once_flag flag;
  std::vector<cd> spectrum;
};

Field::Field(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), cache_(std::make_shared<Cache>()) {
  if (static_cast<int>(values_.size()) != grid_.num_points)
    throw std::invalid_argument("Field: value count does not match grid");
}

Field Field::zero(GridSpec grid) {
  return Field(grid, std::vector<double>(grid.num_points, 0.0));
}

Field Field::from_values(GridSpec grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.num_points);
  for (int j = 0; j < grid.num_points; ++j) v[j] = f(grid.point(j));
  return Field(grid, std::move(v));
}

Field Field::from_spectrum(GridSpec grid, const std::vector<cd>& coeffs) {
  if (static_cast<int>(coeffs.size()) != grid.num_points)
    throw std::invalid_argument("from_spectrum: coefficient count mismatch");
  std::vector<cd> vals = fft::inverse(coeffs);
  std::vector<double> re(vals.size());
  for (std::size_t j = 0; j < vals.size(); ++j) re[j] = vals[j].real();
  return Field(grid, std::move(re));
}

const std::vector<cd>& Field::spectrum() const {
  std::call_once(cache_->flag, [this]() {
    cache_->spectrum = fft::forward_real(values_);
  });
  return cache_->spectrum;
}

double Field::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / values_.size();
}

double Field::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * grid_.dx());
}

double Field::linf_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool Field::finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "operator+");
  std::vector<double> v(a.values());
  for (int j = 0; j < a.size(); ++j) v[j] += b.values()[j];
  return Field(a.grid(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "operator-");
  std::vector<double> v(a.values());
  for (int j = 0; j < a.size(); ++j) v[j] -= b.values()[j];
  return Field(a.grid(), std::move(v));
}

Field operator*(double c, const Field& a) {
  std::vector<double> v(a.values());
  for (double& x : v) x *= c;
  return Field(a.grid(), std::move(v));
}

Field map_values(const Field& a, const std::function<double(double)>& f) {
  std::vector<double> v(a.values());
  for (double& x : v) x = f(x);
  return Field(a.grid(), std::move(v));
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a.values()[j] * b.values()[j];
  return s * a.grid().dx();
}

FourierMultiplier make_multiplier(GridSpec grid, const std::string& name,
                                  const std::function<cd(double)>& symbol,
                                  cd at_zero, bool odd_symbol) {
  std::vector<cd> sym(grid.num_points);
  for (int m = 0; m < grid.num_points; ++m) {
    double xi = grid.wavenumber(m);
    sym[m] = (xi == 0.0) ? at_zero : symbol(xi);
  }
  if (odd_symbol) sym[grid.nyquist_bin()] = 0.0;
  return FourierMultiplier{grid, name, std::move(sym)};
}

FourierMultiplier mult_identity(GridSpec grid) {
  return make_multiplier(grid, "1", [](double) { return cd(1.0); }, cd(1.0), false);
}

FourierMultiplier mult_derivative(GridSpec grid) {
  return make_multiplier(
      grid, "d/dx", [](double xi) { return cd(0.0, xi); }, cd(0.0), true);
}

FourierMultiplier mult_log_abs(GridSpec grid) {
  return make_multiplier(
      grid, "log|D|", [](double xi) { return cd(std::log(std::abs(xi))); },
      cd(0.0), false);
}

FourierMultiplier mult_abs_power(GridSpec grid, double a) {
  return make_multiplier(
      grid, "|D|^" + std::to_string(a),
      [a](double xi) { return cd(std::pow(std::abs(xi), a)); }, cd(0.0), false);
}

FourierMultiplier mult_log_derivative(GridSpec grid) {
  return make_multiplier(
      grid, "2 log|D| d/dx",
      [](double xi) { return cd(0.0, 2.0 * xi * std::log(std::abs(xi))); },
      cd(0.0), true);
}

Field apply_multiplier(const Field& f, const FourierMultiplier& m) {
  require_same_grid(f.grid(), m.grid, "apply_multiplier");
  std::vector<cd> spec(f.spectrum());
  for (int i = 0; i < f.size(); ++i) spec[i] *= m.symbol[i];
  return Field::from_spectrum(f.grid(), spec);
}

Field spectral_shift(const Field& f, double y) {
  const GridSpec& g = f.grid();
  std::vector<cd> spec(f.spectrum());
  int nyq = g.nyquist_bin();
  for (int m = 0; m < g.num_points; ++m) {
    double xi = g.wavenumber(m);
    if (m == nyq) {
      // Unpaired mode: project the shifted cosine back onto the grid.
      spec[m] *= std::cos(xi * y);
    } else {
      spec[m] *= std::exp(cd(0.0, xi * y));
    }
  }
  return Field::from_spectrum(g, spec);
}

Field derivative(const Field& f) {
  return apply_multiplier(f, mult_derivative(f.grid()));
}

namespace {
// theta(r): 1 for r <= 1, 0 for r >= 2.
double lp_theta(double r) { return 1.0 - smooth_step01(r - 1.0); }

double floor_pow2(double x) {
  int e = static_cast<int>(std::floor(std::log2(x) + 1e-12));
  return std::ldexp(1.0, e);
}
double ceil_pow2(double x) {
  int e = static_cast<int>(std::ceil(std::log2(x) - 1e-12));
  return std::ldexp(1.0, e);
}
}  // namespace

double lp_band_symbol(double xi, double lambda) {
  double r = std::abs(xi) / lambda;
  return lp_theta(r) - lp_theta(2.0 * r);
}

std::vector<double> dyadic_bands(GridSpec grid) {
  double lo = floor_pow2(grid.xi1());
  double hi = ceil_pow2(grid.nyquist());
  std::vector<double> bands;
  for (double l = lo; l <= hi * 1.0000000001; l *= 2.0) bands.push_back(l);
  return bands;
}

Field lp_project(const Field& f, double lambda, bool* above_nyquist) {
  const GridSpec& g = f.grid();
  bool flag = lambda > g.nyquist();
  if (above_nyquist) *above_nyquist = flag;
  if (flag) return Field::zero(g);
  std::vector<cd> spec(f.spectrum());
  for (int m = 0; m < g.num_points; ++m)
    spec[m] *= lp_band_symbol(g.wavenumber(m), lambda);
  return Field::from_spectrum(g, spec);
}

double sobolev_norm(const Field& f, double s) {
  const GridSpec& g = f.grid();
  const auto& spec = f.spectrum();
  double acc = 0.0;
  for (int m = 0; m < g.num_points; ++m) {
    double xi = g.wavenumber(m);
    acc += std::pow(1.0 + xi * xi, s) * std::norm(spec[m]);
  }
  return std::sqrt(2.0 * g.half_length * acc);
}

double y_norm(const Field& f, double delta) {
  if (!(delta > 0.0 && delta < 0.25))
    throw std::invalid_argument("y_norm: delta must lie in (0, 1/4)");
  Field lo = apply_multiplier(f, mult_abs_power(f.grid(), 0.75 - delta));
  Field hi = apply_multiplier(f, mult_abs_power(f.grid(), 2.0 + delta));
  return lo.linf_norm() + hi.linf_norm();
}

XNormResult x_norm(const Field& f, double t, double s) {
  if (!(t >= 0.0)) throw std::invalid_argument("x_norm: t must be >= 0");
  const GridSpec& g = f.grid();
  Field fx = derivative(f);
  Field log_fx = apply_multiplier(fx, mult_log_abs(g));
  std::vector<double> w(g.num_points);
  for (int j = 0; j < g.num_points; ++j) {
    double x = g.point(j);
    w[j] = (x + 2.0 * t) * fx.values()[j] + 2.0 * t * log_fx.values()[j];
  }
  Field weighted(g, std::move(w));

  XNormResult out;
  out.value = sobolev_norm(f, s) + weighted.l2_norm();
  double total = 0.0, boundary = 0.0;
  for (int j = 0; j < g.num_points; ++j) {
    double m = f.values()[j] * f.values()[j];
    total += m;
    if (std::abs(g.point(j)) > 0.9 * g.half_length) boundary += m;
  }
  out.boundary_mass_fraction = total > 0.0 ? boundary / total : 0.0;
  out.boundary_warning = out.boundary_mass_fraction > 0.01;
  return out;
}

FrequencyEnvelope frequency_envelope(const Field& f, double s, double delta_env) {
  if (!(delta_env > 0.0 && delta_env < 1.0))
    throw std::invalid_argument("frequency_envelope: delta_env in (0,1)");
  std::vector<double> bands = dyadic_bands(f.grid());
  int n = static_cast<int>(bands.size());
  double floor_value = 1e-14 * sobolev_norm(f, s) + 1e-300;
  std::vector<double> base(n);
  for (int j = 0; j < n; ++j)
    base[j] = sobolev_norm(lp_project(f, bands[j]), s) + floor_value;
  FrequencyEnvelope env{bands, std::vector<double>(n, 0.0), delta_env};
  for (int k = 0; k < n; ++k) {
    double best = 0.0;
    for (int j = 0; j < n; ++j)
      best = std::max(best, std::pow(2.0, -delta_env * std::abs(j - k)) * base[j]);
    env.values[k] = best;
  }
  return env;
}

std::vector<cd> complex_spectrum(GridSpec grid, const std::vector<cd>& values) {
  if (static_cast<int>(values.size()) != grid.num_points)
    throw std::invalid_argument("complex_spectrum: size mismatch");
  return fft::forward(values);
}

std::vector<cd> complex_shift(GridSpec grid, const std::vector<cd>& values,
                              double y) {
  std::vector<cd> spec = fft::forward(values);
  for (int m = 0; m < grid.num_points; ++m)
    spec[m] *= std::exp(cd(0.0, grid.wavenumber(m) * y));
  return fft::inverse(spec);
}

std::vector<cd> complex_lp_project(GridSpec grid, const std::vector<cd>& values,
                                   double lambda) {
  std::vector<cd> spec = fft::forward(values);
  for (int m = 0; m < grid.num_points; ++m)
    spec[m] *= lp_band_symbol(grid.wavenumber(m), lambda);
  return fft::inverse(spec);
}

Field resample(const Field& f, int new_num_points) {
  const GridSpec& g = f.grid();
  if (new_num_points == g.num_points) return f;
  GridSpec g2 = make_grid(g.half_length, new_num_points);
  const auto& spec = f.spectrum();
  std::vector<cd> out(new_num_points, cd(0.0));
  int n = g.num_points, n2 = new_num_points;
  if (n2 > n) {
    for (int m = 0; m < n; ++m) {
      int k = g.mode_of_bin(m);
      if (k == -n / 2) {
        // Split the unpaired mode to keep the upsampled field real.
        out[g2.bin_of_mode(-n / 2)] += 0.5 * spec[m];
        out[g2.bin_of_mode(n / 2)] += 0.5 * spec[m];
      } else {
        out[g2.bin_of_mode(k)] = spec[m];
      }
    }
  } else {
    for (int k = -n2 / 2 + 1; k < n2 / 2; ++k)
      out[g2.bin_of_mode(k)] = spec[g.bin_of_mode(k)];
    out[g2.bin_of_mode(-n2 / 2)] =
        spec[g.bin_of_mode(-n2 / 2)] + spec[g.bin_of_mode(n2 / 2)];
  }
  return Field::from_spectrum(g2, out);
}

}  // namespace sqg
