#include "sqgfront/paradiff.hpp"

#include <algorithm>
#include <cmath>

#include "sqgfront/bumps.hpp"
#include "sqgfront/fft.hpp"
#include "sqgfront/front_operator.hpp"
#include "sqgfront/parallel.hpp"
#include "sqgfront/rng.hpp"

namespace sqg {

double ParaCutoff::chi(double theta) const {
  return plateau_cutoff(theta, 1.0 / 20.0, 1.0 / 10.0);
}

double ParaCutoff::chi_tilde(double theta1, double theta2) const {
  return chi(theta1 * theta1 / (M * M + theta2 * theta2));
}

double ParaCutoff::highpass_at(double xi, double level) const {
  double a = std::abs(xi);
  if (a <= 0.5 * level) return 0.0;
  if (a >= level) return 1.0;
  return smooth_step(a, 0.5 * level, level);
}

double ParaCutoff::highpass(double xi) const { return highpass_at(xi, M); }

ParaCutoff make_cutoff(double M) {
  if (!(M > 0.0)) throw std::invalid_argument("make_cutoff: M must be positive");
  return ParaCutoff{M};
}

namespace {

// Discrete P_{>M} samples. The unpaired Nyquist mode is excluded from the
// quantization: a lone complex coefficient there cannot live on a real grid,
// and keeping it would break the T_a | real-field correspondence.
std::vector<double> highpass_samples(const GridSpec& g, const ParaCutoff& c) {
  std::vector<double> p(g.num_points);
  for (int m = 0; m < g.num_points; ++m) p[m] = c.highpass(g.wavenumber(m));
  p[g.nyquist_bin()] = 0.0;
  return p;
}

}  // namespace

Field apply_Ta(const Field& a, const Field& u, const ParaCutoff& c) {
  if (!(a.grid() == u.grid()))
    throw std::invalid_argument("apply_Ta: grid mismatch");
  const GridSpec& g = a.grid();
  int n = g.num_points;
  const auto& ahat = a.spectrum();
  const auto& uhat = u.spectrum();
  std::vector<double> p = highpass_samples(g, c);
  double xi1 = g.xi1();

  std::vector<cd> pu(n);
  for (int m = 0; m < n; ++m) pu[m] = p[m] * uhat[m];

  std::vector<cd> out(n, cd(0.0));
  parallel_for(n, [&](int kb) {
    if (p[kb] == 0.0) return;
    int k = g.mode_of_bin(kb);
    cd acc(0.0);
    for (int mb = 0; mb < n; ++mb) {
      if (pu[mb] == cd(0.0)) continue;
      int m = g.mode_of_bin(mb);
      int d = k - m;
      if (d < -n / 2 || d >= n / 2) continue;
      double w = c.chi_tilde(xi1 * d, xi1 * (k + m));
      if (w == 0.0) continue;
      acc += w * ahat[g.bin_of_mode(d)] * pu[mb];
    }
    out[kb] = p[kb] * acc;
  });
  return Field::from_spectrum(g, out);
}

OperatorMatrix ta_matrix(const Field& a, const ParaCutoff& c) {
  const GridSpec& g = a.grid();
  int n = g.num_points;
  if (n > 4096)
    throw std::invalid_argument("ta_matrix: grid exceeds the N <= 4096 guard");
  const auto& ahat = a.spectrum();
  std::vector<double> p = highpass_samples(g, c);
  double xi1 = g.xi1();

  OperatorMatrix mat;
  mat.grid = g;
  mat.tag = "T_a";
  for (int m = 0; m < n; ++m)
    if (p[m] > 0.0) mat.bins.push_back(m);
  int dim = mat.dim();
  mat.entries.assign(static_cast<std::size_t>(dim) * dim, cd(0.0));

  parallel_for(dim, [&](int r) {
    int kb = mat.bins[r];
    int k = g.mode_of_bin(kb);
    for (int col = 0; col < dim; ++col) {
      int mb = mat.bins[col];
      int m = g.mode_of_bin(mb);
      int d = k - m;
      if (d < -n / 2 || d >= n / 2) continue;
      double w = c.chi_tilde(xi1 * d, xi1 * (k + m));
      if (w == 0.0) continue;
      mat.entries[static_cast<std::size_t>(r) * dim + col] =
          p[kb] * w * ahat[g.bin_of_mode(d)] * p[mb];
    }
  });
  return mat;
}

std::vector<cd> OperatorMatrix::apply(const std::vector<cd>& x) const {
  int n = dim();
  std::vector<cd> y(n, cd(0.0));
  parallel_for(n, [&](int r) {
    cd acc(0.0);
    const cd* row = entries.data() + static_cast<std::size_t>(r) * n;
    for (int c = 0; c < n; ++c) acc += row[c] * x[c];
    y[r] = acc;
  });
  return y;
}

std::vector<cd> OperatorMatrix::apply_adjoint(const std::vector<cd>& x) const {
  int n = dim();
  std::vector<cd> y(n, cd(0.0));
  parallel_for(n, [&](int c) {
    cd acc(0.0);
    for (int r = 0; r < n; ++r)
      acc += std::conj(entries[static_cast<std::size_t>(r) * n + c]) * x[r];
    y[c] = acc;
  });
  return y;
}

namespace {

double vec_norm(const std::vector<cd>& x) {
  double s = 0.0;
  for (const cd& v : x) s += std::norm(v);
  return std::sqrt(s);
}

cd vec_dot(const std::vector<cd>& a, const std::vector<cd>& b) {
  cd s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

namespace {

// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
double tridiag_max_eig(const std::vector<double>& alpha,
                       const std::vector<double>& beta) {
  int k = static_cast<int>(alpha.size());
  double hi = alpha[0], lo = alpha[0];
  for (int i = 0; i < k; ++i) {
    double off = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                 (i < k - 1 ? std::abs(beta[i]) : 0.0);
    hi = std::max(hi, alpha[i] + off);
    lo = std::min(lo, alpha[i] - off);
  }
  auto count_below = [&](double x) {
    int count = 0;
    double d = 1.0;
    for (int i = 0; i < k; ++i) {
      double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
      d = alpha[i] - x - (d != 0.0 ? b2 / d : b2 / 1e-300);
      if (d < 0.0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi));
       ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// Krylov power iteration (Lanczos with full reorthogonalization) on A*A.
// Smooth symbols give tightly clustered top singular values, where the plain
// power method needs O(1/gap) sweeps; the Krylov estimate converges within
// the iteration budget and remains matvec-only.
double operator_norm(const OperatorMatrix& m) {
  int n = m.dim();
  if (n == 0) return 0.0;
  const int max_iter = std::min(n, 1000);

  CounterRng rng(0x5147u);
  std::vector<std::vector<cd>> basis;
  std::vector<cd> v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(rng.normal(2 * i), rng.normal(2 * i + 1));
  double nv = vec_norm(v);
  for (auto& x : v) x /= nv;
  basis.push_back(v);

  std::vector<double> alpha, beta;
  double lambda = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    std::vector<cd> w = m.apply_adjoint(m.apply(basis[k]));
    if (k > 0)
      for (int i = 0; i < n; ++i) w[i] -= beta[k - 1] * basis[k - 1][i];
    double a = vec_dot(basis[k], w).real();
    alpha.push_back(a);
    for (int i = 0; i < n; ++i) w[i] -= a * basis[k][i];
    for (const auto& q : basis) {  // full reorthogonalization
      cd proj = vec_dot(q, w);
      for (int i = 0; i < n; ++i) w[i] -= proj * q[i];
    }
    double b = vec_norm(w);
    double next = tridiag_max_eig(alpha, beta);
    next = std::max(next, 0.0);
    if (k > 0 && std::abs(next - lambda) <= 1e-8 * std::max(next, 1e-300))
      return std::sqrt(next);
    lambda = next;
    if (b <= 1e-14 * std::sqrt(std::max(lambda, 1e-300)))
      return std::sqrt(lambda);  // Krylov space exhausted
    beta.push_back(b);
    for (auto& x : w) x /= b;
    basis.push_back(std::move(w));
  }
  throw numerical_failure("operator_norm: Krylov iteration did not converge",
                          std::sqrt(std::max(lambda, 0.0)));
}

double operator_norm(const Field& a, const ParaCutoff& c) {
  return operator_norm(ta_matrix(a, c));
}

ChooseMResult choose_M(double R, double r, double s,
                       const std::vector<Field>& samples, double margin) {
  if (samples.empty())
    throw std::invalid_argument("choose_M: needs at least one sample");
  const GridSpec& g = samples.front().grid();
  for (const Field& u : samples) {
    if (!(u.grid() == g)) throw std::invalid_argument("choose_M: grid mismatch");
    if (sobolev_norm(u, s) > R * (1.0 + 1e-9))
      throw std::invalid_argument("choose_M: sample exceeds ||u||_{H^s} <= R");
  }

  std::vector<Field> symbols;
  symbols.reserve(samples.size());
  for (const Field& u : samples)
    symbols.push_back(map_values(
        u, [r](double x) { return 1.0 - std::pow(1.0 - f_shape(x), r); }));

  ChooseMResult res;
  res.margin = margin;
  for (double M = 1.0; M <= 0.5 * g.nyquist() * 1.0000000001; M *= 2.0) {
    ParaCutoff cut = make_cutoff(M);
    double worst = 0.0;
    for (const Field& a : symbols)
      worst = std::max(worst, operator_norm(a, cut));
    res.trace.emplace_back(M, worst);
    if (worst <= 1.0 - margin) {
      res.success = true;
      res.M = M;
      res.achieved_norm = worst;
      return res;
    }
  }
  res.success = false;
  if (!res.trace.empty()) {
    res.M = res.trace.back().first;
    res.achieved_norm = res.trace.back().second;
  }
  return res;
}

double modified_energy(const Field& phi, const Field& v, double s,
                       const ParaCutoff& c) {
  if (!(phi.grid() == v.grid()))
    throw std::invalid_argument("modified_energy: grid mismatch");
  const GridSpec& g = phi.grid();
  Field one_minus =
      map_values(derivative(phi), [](double x) { return 1.0 - f_shape(x); });

  auto quadratic_form = [&](double order) {
    Field dsv = (order == 0.0)
                    ? v
                    : apply_multiplier(v, mult_abs_power(g, order));
    Field weight = (order == 0.0)
                       ? Field::from_values(g, [](double) { return 1.0; })
                       : map_values(one_minus,
                                    [order](double x) { return std::pow(x, order); });
    Field gfield = apply_Ta(weight, dsv, c);
    return inner_product(gfield, apply_Ta(one_minus, gfield, c));
  };

  return quadratic_form(s) + quadratic_form(0.0);
}

}  // namespace sqg
