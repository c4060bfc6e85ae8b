#include "sqgfront/rng.hpp"

#include <cmath>
#include <numbers>

namespace sqg {

namespace {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t x = splitmix64(seed_ ^ splitmix64(stream_));
  return splitmix64(x ^ splitmix64(counter));
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  double u1 = uniform(2 * counter);
  double u2 = uniform(2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sqg
