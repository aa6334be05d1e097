#include "oscloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscloc/error.hpp"

namespace oscloc {

namespace {

Index integral_count(double seconds, double rate, const char* what) {
  const double raw = seconds * rate;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, std::abs(raw))) {
    throw ValidationError(std::string(what) + " * rate must be an integer number of samples");
  }
  return static_cast<Index>(rounded);
}

void check_inputs(const DynParams& params, Index ng, const std::optional<ForcingSpec>& forcing,
                  const SimulationOptions& opts) {
  params.validate();
  if (params.size() != ng) throw ValidationError("params size does not match the number of generators");
  if (!(opts.rate > 0.0)) throw ValidationError("rate must be positive");
  if (!(opts.duration > 0.0)) throw ValidationError("duration must be positive");
  if (!(opts.burn_in >= 0.0)) throw ValidationError("burn-in must be >= 0");
  if (opts.num_samples() < 2) throw ValidationError("simulation needs at least 2 samples");
  if (forcing) {
    forcing->validate();
    if (!(opts.rate > 2.0 * forcing->frequency)) {
      throw ValidationError("Nyquist violation: rate must exceed twice the forcing frequency");
    }
  }
}

nlohmann::json run_meta(const std::optional<ForcingSpec>& forcing, const DynParams& params,
                        const BusIds& gen_ids, const SimulationOptions& opts, const char* engine) {
  nlohmann::json meta;
  meta["seed"] = opts.seed;
  meta["engine"] = engine;
  meta["rate"] = opts.rate;
  meta["duration"] = opts.duration;
  meta["burn_in"] = opts.burn_in;
  meta["initial_state"] = "equilibrium";
  meta["forcing"] = forcing ? to_json(*forcing) : nlohmann::json(nullptr);
  meta["params"] = params_to_json(params, gen_ids);
  return meta;
}

double forcing_phase(const ForcingSpec& f, double t) {
  return std::cos(2.0 * std::numbers::pi * (f.frequency * t + f.phase));
}

}  // namespace

Index SimulationOptions::num_samples() const { return integral_count(duration, rate, "duration"); }

Index SimulationOptions::num_burn_in() const { return integral_count(burn_in, rate, "burn-in"); }

Vector effective_noise(const ReducedModel& model, const NoiseStream& noise, double sigma,
                       std::uint64_t step) {
  const Index ng = model.num_generators();
  const Index nb = model.num_buses();
  Vector xi(nb);
  for (Index b = 0; b < nb; ++b) xi(b) = noise.normal(step, static_cast<std::uint64_t>(b));
  // gamma = [I | W]; eta^gl = xi^g - W xi^l.
  const Vector eta = xi.head(ng) - model.gamma.rightCols(nb - ng) * xi.tail(nb - ng);
  return sigma * eta;
}

Trajectory simulate_reduced(const ReducedModel& model, const DynParams& params,
                            const std::optional<ForcingSpec>& forcing,
                            const SimulationOptions& opts) {
  const Index ng = model.num_generators();
  check_inputs(params, ng, forcing, opts);
  const Index n_keep = opts.num_samples();
  const Index n_skip = opts.num_burn_in();
  const double tau = opts.step();

  Vector force_dir = Vector::Zero(ng);
  if (forcing) {
    force_dir = forcing_sign(model, forcing->source) * forcing->amplitude *
                forcing_gain(model, forcing->source);
  }

  const NoiseStream noise(opts.seed);
  const Vector inv_m = params.inertia.cwiseInverse();

  Trajectory traj;
  traj.dt = tau;
  traj.t0 = static_cast<double>(n_skip) * tau;
  traj.gen_ids = model.gen_ids;
  traj.theta.resize(n_keep, ng);
  traj.omega.resize(n_keep, ng);

  Vector theta = Vector::Zero(ng);
  Vector omega = Vector::Zero(ng);
  Vector accel(ng);
  for (Index i = 0; i < n_skip + n_keep; ++i) {
    if (i >= n_skip) {
      traj.theta.row(i - n_skip) = theta.transpose();
      traj.omega.row(i - n_skip) = omega.transpose();
    }
    if (i + 1 == n_skip + n_keep) break;

    accel = -model.l_reduced * theta - params.damping.cwiseProduct(omega);
    if (params.sigma > 0.0) {
      accel += effective_noise(model, noise, params.sigma, static_cast<std::uint64_t>(i));
    }
    if (forcing) accel += forcing_phase(*forcing, static_cast<double>(i) * tau) * force_dir;
    theta += tau * omega;
    omega += tau * inv_m.cwiseProduct(accel);
  }

  traj.meta = run_meta(forcing, params, model.gen_ids, opts, "reduced");
  return traj;
}

Trajectory simulate_full_dae(const GridCase& grid, const DynParams& params,
                             const std::optional<ForcingSpec>& forcing,
                             const SimulationOptions& opts) {
  const LaplacianBlocks blocks = build_laplacian(grid);
  const Index ng = blocks.num_generators();
  const Index nl = blocks.num_loads();
  check_inputs(params, ng, forcing, opts);
  const Index n_keep = opts.num_samples();
  const Index n_skip = opts.num_burn_in();
  const double tau = opts.step();

  Eigen::LLT<Matrix> ll_factor;
  if (nl > 0) {
    ll_factor.compute(blocks.ll);
    if (ll_factor.info() != Eigen::Success) {
      throw NumericalError("load island: L^ll is singular (a load component has no generator)");
    }
  }

  // Forcing enters the generator rows or the load rows directly.
  Vector force_g = Vector::Zero(ng);
  Vector force_l = Vector::Zero(nl);
  if (forcing) {
    if (!grid.has_bus(forcing->source)) {
      throw ValidationError("unknown forcing source bus " + std::to_string(forcing->source));
    }
    const BusIds order = grid.canonical_ids();
    const Index pos = static_cast<Index>(
        std::find(order.begin(), order.end(), forcing->source) - order.begin());
    if (pos < ng) {
      force_g(pos) = forcing->amplitude;
    } else {
      force_l(pos - ng) = forcing->amplitude;
    }
  }

  const NoiseStream noise(opts.seed);
  const Vector inv_m = params.inertia.cwiseInverse();

  Trajectory traj;
  traj.dt = tau;
  traj.t0 = static_cast<double>(n_skip) * tau;
  traj.gen_ids = blocks.gen_ids;
  traj.theta.resize(n_keep, ng);
  traj.omega.resize(n_keep, ng);

  Vector theta = Vector::Zero(ng);
  Vector omega = Vector::Zero(ng);
  Vector eta_g(ng), eta_l(nl), theta_l(nl), accel(ng);
  for (Index i = 0; i < n_skip + n_keep; ++i) {
    if (i >= n_skip) {
      traj.theta.row(i - n_skip) = theta.transpose();
      traj.omega.row(i - n_skip) = omega.transpose();
    }
    if (i + 1 == n_skip + n_keep) break;

    const auto step = static_cast<std::uint64_t>(i);
    for (Index b = 0; b < ng; ++b) {
      eta_g(b) = params.sigma * noise.normal(step, static_cast<std::uint64_t>(b));
    }
    for (Index b = 0; b < nl; ++b) {
      eta_l(b) = params.sigma * noise.normal(step, static_cast<std::uint64_t>(ng + b));
    }
    const double c = forcing ? forcing_phase(*forcing, static_cast<double>(i) * tau) : 0.0;

    accel = -blocks.gg * theta - params.damping.cwiseProduct(omega) + eta_g + c * force_g;
    if (nl > 0) {
      theta_l = ll_factor.solve(eta_l + c * force_l - blocks.lg * theta);
      accel -= blocks.gl * theta_l;
    }
    theta += tau * omega;
    omega += tau * inv_m.cwiseProduct(accel);
  }

  traj.meta = run_meta(forcing, params, blocks.gen_ids, opts, "full_dae");
  traj.meta["case"] = grid.name;
  return traj;
}

}  // namespace oscloc
