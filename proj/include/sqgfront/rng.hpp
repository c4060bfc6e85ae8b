#ifndef SQGFRONT_RNG_HPP
#define SQGFRONT_RNG_HPP

#include <cstdint>

namespace sqg {

// Counter-based generator: value(i) is a pure function of (seed, stream, i),
// so draws are independent of evaluation order and thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform on [0, 1).
  double uniform(std::uint64_t counter) const;
  // Standard normal via Box-Muller on counters (2*counter, 2*counter+1).
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace sqg

#endif
