#include "sqgfront/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace sqg::fft {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<int, PlanPair>& plan_cache() {
  static std::map<int, PlanPair> cache;
  return cache;
}

// Plans are created once per size with FFTW_UNALIGNED so they can be executed
// on any buffer (new-array execution is thread safe).
const PlanPair& plans_for(int n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cd> scratch_in(n), scratch_out(n);
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
      reinterpret_cast<fftw_complex*>(scratch_out.data()), FFTW_FORWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
      reinterpret_cast<fftw_complex*>(scratch_out.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<cd> forward(const std::vector<cd>& values) {
  int n = static_cast<int>(values.size());
  const PlanPair& p = plans_for(n);
  std::vector<cd> in(values), out(n);
  fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  double inv_n = 1.0 / n;
  for (auto& c : out) c *= inv_n;
  return out;
}

std::vector<cd> inverse(const std::vector<cd>& coeffs) {
  int n = static_cast<int>(coeffs.size());
  const PlanPair& p = plans_for(n);
  std::vector<cd> in(coeffs), out(n);
  fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<cd> forward_real(const std::vector<double>& values) {
  std::vector<cd> tmp(values.begin(), values.end());
  return forward(tmp);
}

}  // namespace sqg::fft
