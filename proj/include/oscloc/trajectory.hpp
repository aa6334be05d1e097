#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oscloc/types.hpp"

namespace oscloc {

/// Uniformly sampled generator angle and frequency deviations.
/// Row i of theta/omega is the state at t0 + i * dt.
struct Trajectory {
  double dt = 0.0;
  double t0 = 0.0;
  BusIds gen_ids;
  Matrix theta;  // N x |G|, rad
  Matrix omega;  // N x |G|, rad/s
  nlohmann::json meta = nlohmann::json::object();

  Index n_samples() const { return theta.rows(); }
  Index num_generators() const { return theta.cols(); }
  double duration() const { return static_cast<double>(n_samples()) * dt; }

  /// Stacked state X_i = [theta_i; omega_i] as an N x 2|G| matrix.
  Matrix states() const;

  void validate() const;
};

/// Writes `<path>` (CSV) and `<path>.meta.json`. Optional `comment` becomes a
/// leading "# ..." line of the CSV.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                      const std::string& comment = {});

/// Reads a trajectory CSV; the sidecar is used when present.
Trajectory read_trajectory(const std::filesystem::path& path);

std::filesystem::path meta_path(const std::filesystem::path& csv_path);

}  // namespace oscloc
