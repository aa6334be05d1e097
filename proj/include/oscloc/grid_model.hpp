#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oscloc/types.hpp"

namespace oscloc {

enum class BusKind { Generator, Load };

struct Bus {
  BusId id = 0;
  BusKind kind = BusKind::Load;
  double power = 0.0;        // p.u., positive for generation
  double voltage_mag = 1.0;  // p.u.
  std::optional<double> inertia;  // s^2, generators only
  std::optional<double> damping;  // s, generators only

  bool is_generator() const { return kind == BusKind::Generator; }
};

struct Line {
  BusId from = 0;
  BusId to = 0;
  double susceptance = 0.0;  // p.u.
};

/// A lossless transmission grid: buses, lines and the generator/load split.
///
/// Every matrix and vector derived from a case uses the canonical bus order:
/// generators ascending by id, then loads ascending by id.
struct GridCase {
  std::string name;
  std::vector<Bus> buses;
  std::vector<Line> lines;

  BusIds generator_ids() const;
  BusIds load_ids() const;
  /// generator_ids() followed by load_ids().
  BusIds canonical_ids() const;

  bool has_bus(BusId id) const;
  const Bus& bus(BusId id) const;
};

/// Checks every structural invariant and throws ValidationError naming the
/// first one violated.
void validate(const GridCase& grid);

/// Builds a GridCase from the case-file JSON schema and validates it.
GridCase parse_case(const nlohmann::json& doc);
GridCase parse_case_text(std::string_view text);
GridCase load_case(const std::filesystem::path& path);

nlohmann::json to_json(const GridCase& grid);

struct LaplacianBlocks {
  Matrix full;  // canonical order
  Matrix gg, gl, lg, ll;
  BusIds gen_ids;
  BusIds load_ids;
  Vector power;  // P_i in canonical order

  Index num_generators() const { return static_cast<Index>(gen_ids.size()); }
  Index num_loads() const { return static_cast<Index>(load_ids.size()); }
};

/// L_ij = -|V_i||V_j| b_ij off the diagonal, row sums on the diagonal.
LaplacianBlocks build_laplacian(const GridCase& grid);

}  // namespace oscloc
