#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "oscloc/localization.hpp"
#include "oscloc/trajectory.hpp"

namespace oscloc {

std::string tool_version();

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string content_hash(std::string_view bytes);

/// Provenance stamped into every output file.
struct OutputTag {
  std::string scenario_hash;  // empty outside scenario runs

  /// "oscloc <version>[ scenario=<hash>]", used as a CSV comment line.
  std::string comment() const;
  nlohmann::json to_json() const;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// bus_id,k,freq_hz,loglik,gamma_hat,phi_hat in ranking order (best first),
/// optionally truncated to the `top` best rows.
void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path,
                    const OutputTag& tag, std::optional<std::size_t> top = std::nullopt);

nlohmann::json scan_summary(const ScanResult& scan, const OutputTag& tag);

/// Writes into `dir`:
///   loglik_vs_freq.csv  one row per bin, one loglik column per scanned bus
///   spectrum.csv        |omega~(k)| per generator over the same bins
///   summary.json        scan_summary()
void emit_report(const ScanResult& scan, const Trajectory& traj, const std::filesystem::path& dir,
                 const OutputTag& tag);

}  // namespace oscloc
