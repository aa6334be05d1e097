#pragma once

#include <nlohmann/json.hpp>

#include "oscloc/grid_model.hpp"
#include "oscloc/types.hpp"

namespace oscloc {

/// Diagonal inertia and damping per generator (canonical generator order)
/// plus the homogeneous noise scale.
struct DynParams {
  Vector inertia;  // s^2
  Vector damping;  // s
  double sigma = 0.0;

  Index size() const { return inertia.size(); }
  void validate() const;
};

/// Reads the true generator inertia/damping stored in a case file.
DynParams true_params(const GridCase& grid, double sigma);

/// Sinusoidal injection gamma * cos(2 pi (f t + phi)) at one bus.
struct ForcingSpec {
  BusId source = 0;
  double amplitude = 0.0;  // p.u.
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // cycles, [0, 1)

  void validate() const;
};

/// Parses "source=<id>,freq=<Hz>,amp=<gamma>,phase=<cycles>" (phase optional).
ForcingSpec parse_forcing(const std::string& text);

nlohmann::json to_json(const ForcingSpec& f);
ForcingSpec forcing_from_json(const nlohmann::json& j);

/// params.json layout: inertia/damping keyed by bus id, plus sigma.
nlohmann::json params_to_json(const DynParams& p, const BusIds& gen_ids);
DynParams params_from_json(const nlohmann::json& j, const BusIds& gen_ids);

}  // namespace oscloc
