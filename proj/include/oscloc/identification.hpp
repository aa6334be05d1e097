#pragma once

#include <nlohmann/json.hpp>

#include "oscloc/params.hpp"
#include "oscloc/reduction.hpp"
#include "oscloc/trajectory.hpp"

namespace oscloc {

/// Time-averaged second moments of X_i = [theta_i; omega_i] and the finite
/// differences Delta_i = (X_{i+1} - X_i) / tau over i = 0..N-2.
struct MomentEstimates {
  Matrix s0;     // E[X X^T]
  Matrix s1;     // E[Delta X^T]
  Matrix s2;     // E[Delta Delta^T]
  Matrix a_hat;  // S1 S0^-1
  Index n_used = 0;
  double dt = 0.0;
  double condition_number = 0.0;

  Index num_generators() const { return s0.rows() / 2; }
};

/// Largest condition number of S0 accepted before reporting insufficient excitation.
inline constexpr double kMaxMomentCondition = 1e12;

MomentEstimates empirical_moments(const Trajectory& traj);

/// Inertia and damping per generator from the bottom blocks of A-hat, using
/// the known reduced Laplacian; sigma from the residual second moment.
///
/// For generator i with Laplacian row l_i and A-hat bottom-left row b_i:
///   1/m_i = -(b_i . l_i) / (l_i . l_i),   d_i = -m_i * A-hat_{bottom-right, ii}
///   sigma^2 = tr(M R M) / tr(sigma_shape),  R = E[r r^T],
/// where r = Delta_omega - (A-hat X)_omega.
DynParams extract_params(const MomentEstimates& moments, const ReducedModel& model);

/// params.json document including the diagnostics block.
nlohmann::json params_report(const DynParams& params, const MomentEstimates& moments,
                             const BusIds& gen_ids);

}  // namespace oscloc
