#pragma once

#include <cstdint>

namespace oscloc {

/// Counter-based standard normal source: the value drawn for (step, bus)
/// depends only on (seed, step, bus), never on call order. The reduced and
/// full simulators therefore see identical noise realizations.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

  /// Standard normal variate for canonical bus index `bus` at time step `step`.
  double normal(std::uint64_t step, std::uint64_t bus) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace oscloc
