#pragma once

#include <vector>

#include "oscloc/grid_model.hpp"
#include "oscloc/params.hpp"
#include "oscloc/types.hpp"

namespace oscloc {

/// Generator-only equivalent of a grid after eliminating every load bus.
///
/// With W = L^gl (L^ll)^-1:
///   l_reduced   = L^gg - W L^lg
///   sigma_shape = I + W W^T          (effective noise covariance / sigma^2)
///   gamma       = [I | W]            (column per bus, canonical order)
///   p_reduced   = -W P^l
struct ReducedModel {
  Matrix l_reduced;
  Matrix sigma_shape;
  Matrix gamma;
  Vector p_reduced;
  BusIds gen_ids;
  BusIds load_ids;

  Index num_generators() const { return static_cast<Index>(gen_ids.size()); }
  Index num_buses() const { return static_cast<Index>(gen_ids.size() + load_ids.size()); }

  /// Generators then loads, the column order of `gamma`.
  BusIds bus_ids() const;
  bool is_generator(BusId id) const;
  /// Column of `gamma` for a bus id; throws ValidationError if unknown.
  Index column_of(BusId id) const;

  /// Load-forcing map -L^gl (L^ll)^-1, |G| x |L|.
  Matrix effective_forcing_map() const;
};

ReducedModel kron_reduce(const LaplacianBlocks& blocks);

/// sigma^2 * sigma_shape.
Matrix noise_covariance(const ReducedModel& model, double sigma);

/// Gamma_l: e_l for a generator, L^gl (L^ll)^-1 e_l for a load.
Vector forcing_gain(const ReducedModel& model, BusId source);

/// +1 for generator sources, -1 for loads: the physical forcing seen by the
/// generators is sign * gamma * Gamma_l * cos(2 pi (f t + phi)).
double forcing_sign(const ReducedModel& model, BusId source);

/// Buses whose forcing gains coincide up to sign within `tol` (max norm),
/// closed transitively. Groups are sorted by their smallest id, ids ascending.
std::vector<BusIds> degeneracy_groups(const ReducedModel& model, double tol = 1e-10);

/// Undamped natural frequencies (Hz) of M^-1 L^r, zero mode dropped, ascending.
/// Diagnostic only.
std::vector<double> natural_modes(const ReducedModel& model, const DynParams& params);

nlohmann::json to_json(const ReducedModel& model);

}  // namespace oscloc
