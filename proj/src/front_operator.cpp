#include "sqgfront/front_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqgfront/fft.hpp"
#include "sqgfront/parallel.hpp"

namespace sqg {

double f_shape(double s) { return 1.0 - 1.0 / std::sqrt(1.0 + s * s); }

double f_shape_deriv(double s) {
  double t = 1.0 + s * s;
  return s / (t * std::sqrt(t));
}

QuadratureScheme make_quadrature(double y_max, int n_y, double grading) {
  if (!(y_max > 0.0))
    throw std::invalid_argument("make_quadrature: y_max must be positive");
  if (n_y < 16 || n_y % 2 != 0)
    throw std::invalid_argument("make_quadrature: n_y must be even and >= 16");
  if (!(grading >= 1.0))
    throw std::invalid_argument("make_quadrature: grading must be >= 1");

  int half = n_y / 2;
  std::vector<double> t(half + 1), boundary(half + 1);
  for (int j = 1; j <= half; ++j)
    t[j] = y_max * std::pow(static_cast<double>(j) / half, grading);
  boundary[0] = 0.0;
  boundary[half] = y_max;
  for (int j = 1; j < half; ++j) boundary[j] = 0.5 * (t[j] + t[j + 1]);

  QuadratureScheme q;
  q.y_max = y_max;
  q.grading = grading;
  q.nodes.reserve(n_y);
  q.weights.reserve(n_y);
  // Interleave +-pairs so odd integrands cancel term by term.
  for (int j = 1; j <= half; ++j) {
    double w = boundary[j] - boundary[j - 1];
    q.nodes.push_back(t[j]);
    q.weights.push_back(w);
    q.nodes.push_back(-t[j]);
    q.weights.push_back(w);
  }
  return q;
}

Field diff_quotient(const Field& f, double y, bool absolute) {
  if (y == 0.0) throw std::invalid_argument("diff_quotient: y must be nonzero");
  Field shifted = spectral_shift(f, y);
  double denom = absolute ? std::abs(y) : y;
  return (1.0 / denom) * (shifted - f);
}

namespace {

// Shifted samples straight from a cached spectrum; mirrors spectral_shift but
// avoids Field overhead in the quadrature loop.
std::vector<double> shifted_values(const GridSpec& g, const std::vector<cd>& spec,
                                   double y) {
  std::vector<cd> s(spec);
  int nyq = g.nyquist_bin();
  for (int m = 0; m < g.num_points; ++m) {
    double xi = g.wavenumber(m);
    if (m == nyq)
      s[m] *= std::cos(xi * y);
    else
      s[m] *= std::exp(cd(0.0, xi * y));
  }
  std::vector<cd> vals = fft::inverse(s);
  std::vector<double> out(vals.size());
  for (std::size_t j = 0; j < vals.size(); ++j) out[j] = vals[j].real();
  return out;
}

constexpr int kPairBlock = 8;

}  // namespace

Field apply_A(const Field& phi, const Field& v, const QuadratureScheme& q) {
  if (!(phi.grid() == v.grid()))
    throw std::invalid_argument("apply_A: grid mismatch");
  const GridSpec& g = phi.grid();
  const auto& spec_phi = phi.spectrum();
  const auto& spec_v = v.spectrum();
  const auto& pv = phi.values();
  const auto& vv = v.values();
  int n = g.num_points;
  int pairs = q.node_count() / 2;

  std::vector<double> acc = blocked_vector_sum(
      pairs, kPairBlock, n, [&](int p, std::vector<double>& out) {
        double y = q.nodes[2 * p];
        double w = q.weights[2 * p];
        for (double sign : {1.0, -1.0}) {
          double ys = sign * y;
          std::vector<double> phi_s = shifted_values(g, spec_phi, ys);
          std::vector<double> v_s = shifted_values(g, spec_v, ys);
          double inv_y = 1.0 / ys;
          double inv_abs = 1.0 / std::abs(ys);
          for (int j = 0; j < n; ++j) {
            double dq_phi = (phi_s[j] - pv[j]) * inv_y;
            double dq_v = (v_s[j] - vv[j]) * inv_abs;
            out[j] += w * f_shape(dq_phi) * dq_v;
          }
        }
      });
  return Field(g, std::move(acc));
}

namespace {

// One-sided integral int_eps^inf cos(y)/y dy + log(eps); the epsilon error is
// O(eps^2). The oscillatory part is summed per period with Simpson's rule and
// finished with two integration-by-parts tail terms.
double cosine_log_integral(double eps) {
  // [eps, 1]: integrand (cos y - 1)/y is smooth and vanishes at 0.
  auto f1 = [](double y) { return y == 0.0 ? 0.0 : (std::cos(y) - 1.0) / y; };
  int n1 = 4096;
  double h1 = (1.0 - eps) / n1, part1 = 0.0;
  for (int i = 0; i < n1; ++i) {
    double a = eps + i * h1;
    part1 += (h1 / 6.0) * (f1(a) + 4.0 * f1(a + 0.5 * h1) + f1(a + h1));
  }
  // [1, A]: Simpson with fixed resolution per period.
  const double A = 1.0e4;
  auto f2 = [](double y) { return std::cos(y) / y; };
  const double period = 2.0 * std::numbers::pi;
  int per_period = 256;
  long total_steps = static_cast<long>((A - 1.0) / period * per_period) + 1;
  double h2 = (A - 1.0) / total_steps, part2 = 0.0;
  for (long i = 0; i < total_steps; ++i) {
    double a = 1.0 + i * h2;
    part2 += (h2 / 6.0) * (f2(a) + 4.0 * f2(a + 0.5 * h2) + f2(a + h2));
  }
  // Tail beyond A.
  double tail = -std::sin(A) / A + std::cos(A) / (A * A);
  return part1 + part2 + tail;
}

}  // namespace

PvConstant pv_unit_constant() {
  static const PvConstant cached = [] {
    std::vector<double> schedule{1e-2, 1e-3, 1e-4};
    std::vector<double> vals;
    for (double eps : schedule) vals.push_back(2.0 * cosine_log_integral(eps));
    double spread = std::abs(vals[2] - vals[1]);
    if (spread > 1e-6)
      throw numerical_failure("pv_unit_constant: schedule did not converge",
                              vals.back());
    // Richardson in eps^2 on the last two schedule points.
    double e1 = schedule[1], e2 = schedule[2];
    double value =
        (e1 * e1 * vals[2] - e2 * e2 * vals[1]) / (e1 * e1 - e2 * e2);
    return PvConstant{value, schedule, 2};
  }();
  return cached;
}

Field b0_symbol(const Field& phi, const QuadratureScheme& q) {
  const GridSpec& g = phi.grid();
  if (!(q.y_max > 1.0))
    throw std::invalid_argument("b0_symbol: scheme must reach past |y| = 1");
  const auto& spec_phi = phi.spectrum();
  const auto& pv = phi.values();
  int n = g.num_points;

  Field fx = derivative(phi);
  std::vector<double> f_fx(n);
  for (int j = 0; j < n; ++j) f_fx[j] = f_shape(fx.values()[j]);

  // Inner part: int_{|y|<1} (F(delta^y phi) - F(phi_x)) / |y| dy on a graded
  // symmetric mesh; the integrand has one-sided limits at 0 that the +- pairs
  // average out.
  QuadratureScheme inner =
      make_quadrature(1.0, std::max(32, (q.node_count() / 2) * 2), q.grading);
  int inner_pairs = inner.node_count() / 2;

  // Outer part: int_{1<=|y|<=Y_max} F(delta^y phi)/|y| dy via midpoint in log y.
  int outer_n = std::max(16, q.node_count() / 2);
  double w_len = std::log(q.y_max);
  double dw = w_len / outer_n;

  int items = inner_pairs + outer_n;
  std::vector<double> acc = blocked_vector_sum(
      items, kPairBlock, n, [&](int item, std::vector<double>& out) {
        if (item < inner_pairs) {
          double y = inner.nodes[2 * item];
          double w = inner.weights[2 * item];
          for (double sign : {1.0, -1.0}) {
            double ys = sign * y;
            std::vector<double> phi_s = shifted_values(g, spec_phi, ys);
            double inv_y = 1.0 / ys;
            double inv_abs = 1.0 / std::abs(ys);
            for (int j = 0; j < n; ++j) {
              double dq = (phi_s[j] - pv[j]) * inv_y;
              out[j] += w * (f_shape(dq) - f_fx[j]) * inv_abs;
            }
          }
        } else {
          int i = item - inner_pairs;
          double y = std::exp((i + 0.5) * dw);
          for (double sign : {1.0, -1.0}) {
            double ys = sign * y;
            std::vector<double> phi_s = shifted_values(g, spec_phi, ys);
            double inv_y = 1.0 / ys;
            for (int j = 0; j < n; ++j) {
              double dq = (phi_s[j] - pv[j]) * inv_y;
              out[j] += dw * f_shape(dq);
            }
          }
        }
      });

  double c0 = pv_unit_constant().value;
  for (int j = 0; j < n; ++j) acc[j] -= c0 * f_fx[j];
  return Field(g, std::move(acc));
}

Field nonlinear_term(const Field& phi, const QuadratureScheme& q, int oversample) {
  if (oversample != 1 && oversample != 2)
    throw std::invalid_argument("nonlinear_term: oversample must be 1 or 2");
  if (oversample == 1) return apply_A(phi, derivative(phi), q);
  Field up = resample(phi, 2 * phi.grid().num_points);
  Field out = apply_A(up, derivative(up), q);
  return resample(out, phi.grid().num_points);
}

Field rhs(const Field& phi, const QuadratureScheme& q, int oversample) {
  return nonlinear_term(phi, q, oversample) +
         apply_multiplier(phi, mult_log_derivative(phi.grid()));
}

Field paralin_residual(const Field& phi, const Field& v,
                       const QuadratureScheme& q, const ParaCutoff& c) {
  Field b0 = b0_symbol(phi, q);
  Field f_fx = map_values(derivative(phi), f_shape);
  Field log_v = apply_multiplier(v, mult_log_abs(v.grid()));
  return apply_A(phi, v, q) - apply_Ta(b0, v, c) +
         2.0 * apply_Ta(f_fx, log_v, c);
}

}  // namespace sqg
