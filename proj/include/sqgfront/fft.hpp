#ifndef SQGFRONT_FFT_HPP
#define SQGFRONT_FFT_HPP

#include <complex>
#include <vector>

namespace sqg::fft {

using cd = std::complex<double>;

// Forward transform returns Fourier-series coefficients in FFT bin order
// (bin m holds mode k = m for m < N/2, k = m - N otherwise), i.e. DFT / N.
std::vector<cd> forward(const std::vector<cd>& values);

// Exact inverse of forward.
std::vector<cd> inverse(const std::vector<cd>& coeffs);

std::vector<cd> forward_real(const std::vector<double>& values);

}  // namespace sqg::fft

#endif
