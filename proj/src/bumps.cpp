#include "sqgfront/bumps.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace sqg {

double bump_template(double r) {
  double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

namespace {

constexpr int kLutCells = 4096;

struct StepTable {
  std::vector<double> cum;  // cumulative integral at the cell boundaries
  double total;
  StepTable() : cum(kLutCells + 1, 0.0) {
    // Composite Simpson per cell on [-1, 1].
    const double h = 2.0 / kLutCells;
    double acc = 0.0;
    for (int i = 0; i < kLutCells; ++i) {
      double a = -1.0 + i * h;
      double b = a + h;
      acc += (h / 6.0) *
             (bump_template(a) + 4.0 * bump_template(0.5 * (a + b)) +
              bump_template(b));
      cum[i + 1] = acc;
    }
    total = acc;
  }
};

const StepTable& step_table() {
  static const StepTable t;
  return t;
}

}  // namespace

double bump_template_mass() { return step_table().total; }

double smooth_step01(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const StepTable& t = step_table();
  // Position in template coordinates r in (-1, 1).
  double r = 2.0 * s - 1.0;
  double u = (r + 1.0) / 2.0 * kLutCells;
  int cell = static_cast<int>(u);
  if (cell >= kLutCells) cell = kLutCells - 1;
  double frac = u - cell;
  double h = 2.0 / kLutCells;
  double r0 = -1.0 + cell * h;
  // Cubic Hermite with exact slopes (the integrand itself).
  double p0 = t.cum[cell], p1 = t.cum[cell + 1];
  double m0 = bump_template(r0) * h, m1 = bump_template(r0 + h) * h;
  double f = frac, f2 = f * f, f3 = f2 * f;
  double val = (2 * f3 - 3 * f2 + 1) * p0 + (f3 - 2 * f2 + f) * m0 +
               (-2 * f3 + 3 * f2) * p1 + (f3 - f2) * m1;
  return val / t.total;
}

double smooth_step(double x, double a, double b) {
  return smooth_step01((x - a) / (b - a));
}

double plateau_cutoff(double x, double inner, double outer) {
  double ax = std::abs(x);
  if (ax <= inner) return 1.0;
  if (ax >= outer) return 0.0;
  return smooth_step01((outer - ax) / (outer - inner));
}

}  // namespace sqg
