#include "oscloc/noise.hpp"

#include <cmath>
#include <numbers>

namespace oscloc {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1].
double unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double NoiseStream::normal(std::uint64_t step, std::uint64_t bus) const {
  const std::uint64_t key = mix(mix(mix(seed_) ^ step) ^ (bus * 0xd6e8feb86659fd93ULL));
  const double u1 = unit(mix(key));
  const double u2 = unit(mix(key ^ 0xa0761d6478bd642fULL));
  // Box-Muller, cosine branch.
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace oscloc
