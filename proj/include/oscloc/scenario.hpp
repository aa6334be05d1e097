#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "oscloc/localization.hpp"
#include "oscloc/params.hpp"

namespace oscloc {

struct RunWindow {
  double duration = 0.0;  // s
  double rate = 0.0;      // Hz
  std::uint64_t seed = 0;
};

/// One end-to-end experiment: learn M, D from an ambient window, then localize
/// a forced window of the same grid.
struct Scenario {
  std::string name;
  std::filesystem::path case_path;
  RunWindow ambient;
  RunWindow event;
  ForcingSpec forcing;
  double sigma = 0.0;
  std::filesystem::path output_dir;
  std::optional<std::pair<double, double>> band;  // Hz
  std::string hash;                               // of the scenario file bytes

  void validate() const;
};

/// Relative paths inside the document resolve against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioOutcome {
  DynParams learned;
  ScanResult scan;
  nlohmann::json summary;
};

/// simulate ambient -> learn -> simulate forced -> localize -> report, writing
/// every artifact to scenario.output_dir. Errors are re-thrown with the stage name.
ScenarioOutcome run_scenario(const Scenario& scenario, unsigned threads = 0);

}  // namespace oscloc
