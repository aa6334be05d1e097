#pragma once

#include <cstdint>
#include <optional>

#include "oscloc/grid_model.hpp"
#include "oscloc/noise.hpp"
#include "oscloc/params.hpp"
#include "oscloc/reduction.hpp"
#include "oscloc/trajectory.hpp"

namespace oscloc {

struct SimulationOptions {
  double duration = 0.0;  // s
  double rate = 0.0;      // Hz
  std::uint64_t seed = 0;
  double burn_in = 0.0;   // s simulated and discarded before the recorded window

  /// Number of recorded samples, duration * rate; throws if not an integer.
  Index num_samples() const;
  Index num_burn_in() const;
  double step() const { return 1.0 / rate; }
};

/// Effective generator noise for one step: sigma * (xi^g - L^gl (L^ll)^-1 xi^l),
/// xi drawn from `noise` for all buses in canonical order.
Vector effective_noise(const ReducedModel& model, const NoiseStream& noise, double sigma,
                       std::uint64_t step);

/// Euler-Maruyama integration of the Kron-reduced swing dynamics from rest:
///
///   theta_{i+1} = theta_i + tau * omega_i
///   omega_{i+1} = omega_i + tau * M^-1 (-L^r theta_i - D omega_i + eta_i + F(t_i))
///
/// with eta_i ~ N(0, sigma^2 sigma_shape) per sample and
/// F(t) = s * gamma * Gamma_l * cos(2 pi (f t + phi)), s = +1 (generator) / -1 (load).
Trajectory simulate_reduced(const ReducedModel& model, const DynParams& params,
                            const std::optional<ForcingSpec>& forcing,
                            const SimulationOptions& opts);

/// Same dynamics without reduction: each step solves the algebraic load
/// equations L^ll theta^l = eta^l + f^l - L^lg theta^g, then advances the
/// generators with the full L^gg / L^gl coupling. Returns generator states only.
Trajectory simulate_full_dae(const GridCase& grid, const DynParams& params,
                             const std::optional<ForcingSpec>& forcing,
                             const SimulationOptions& opts);

}  // namespace oscloc
