#include "oscloc/identification.hpp"

#include <cmath>

#include "oscloc/error.hpp"

namespace oscloc {

MomentEstimates empirical_moments(const Trajectory& traj) {
  traj.validate();
  const Index ng = traj.num_generators();
  const Index n = traj.n_samples();
  if (n < 2 * ng + 2) {
    throw ValidationError("trajectory too short for moment estimation: need at least " +
                          std::to_string(2 * ng + 2) + " samples");
  }

  const Matrix x = traj.states();
  const Index used = n - 1;
  const auto head = x.topRows(used);
  const Matrix delta = (x.bottomRows(used) - head) / traj.dt;

  MomentEstimates m;
  m.n_used = used;
  m.dt = traj.dt;
  const double inv = 1.0 / static_cast<double>(used);
  m.s0 = inv * head.transpose() * head;
  m.s1 = inv * delta.transpose() * head;
  m.s2 = inv * delta.transpose() * delta;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.s0, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  m.condition_number = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(hi > 0.0) || !(m.condition_number <= kMaxMomentCondition)) {
    throw NumericalError("insufficient excitation: S0 condition number " +
                         std::to_string(m.condition_number));
  }

  // A S0 = S1  <=>  S0 A^T = S1^T (S0 symmetric).
  Eigen::LDLT<Matrix> ldlt(m.s0);
  m.a_hat = ldlt.solve(m.s1.transpose()).transpose();
  return m;
}

DynParams extract_params(const MomentEstimates& moments, const ReducedModel& model) {
  const Index ng = model.num_generators();
  if (moments.num_generators() != ng) {
    throw ValidationError("moment estimates do not match the number of generators");
  }
  const Matrix& a = moments.a_hat;
  const auto lower_left = a.bottomLeftCorner(ng, ng);
  const auto lower_right = a.bottomRightCorner(ng, ng);

  DynParams p;
  p.inertia.resize(ng);
  p.damping.resize(ng);
  for (Index i = 0; i < ng; ++i) {
    const BusId id = model.gen_ids[static_cast<std::size_t>(i)];
    const auto row = model.l_reduced.row(i);
    const double norm2 = row.squaredNorm();
    if (!(norm2 > 0.0)) throw IdentificationError(id, "generator has no coupling in L^r");
    const double inv_m = -lower_left.row(i).dot(row) / norm2;
    if (!(inv_m > 0.0) || !std::isfinite(inv_m)) {
      throw IdentificationError(id, "non-positive inertia estimate");
    }
    p.inertia(i) = 1.0 / inv_m;
    p.damping(i) = -p.inertia(i) * lower_right(i, i);
    if (!(p.damping(i) > 0.0) || !std::isfinite(p.damping(i))) {
      throw IdentificationError(id, "non-positive damping estimate");
    }
  }

  // Residual second moment of the frequency block:
  //   E[(D2 - A2 X)(D2 - A2 X)^T] = S2_22 - A2 S1_2^T - S1_2 A2^T + A2 S0 A2^T.
  const Matrix a2 = a.bottomRows(ng);
  const Matrix s1_2 = moments.s1.bottomRows(ng);
  const Matrix resid = moments.s2.bottomRightCorner(ng, ng) - a2 * s1_2.transpose() -
                       s1_2 * a2.transpose() + a2 * moments.s0 * a2.transpose();
  const Matrix scaled = p.inertia.asDiagonal() * resid * p.inertia.asDiagonal();
  const double var = scaled.trace() / model.sigma_shape.trace();
  p.sigma = std::sqrt(std::max(var, 0.0));
  return p;
}

nlohmann::json params_report(const DynParams& params, const MomentEstimates& moments,
                             const BusIds& gen_ids) {
  nlohmann::json j = params_to_json(params, gen_ids);
  j["diagnostics"] = {{"condition_number", moments.condition_number},
                      {"n_used", moments.n_used}};
  return j;
}

}  // namespace oscloc
