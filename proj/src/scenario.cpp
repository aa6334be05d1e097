#include "oscloc/scenario.hpp"

#include <fstream>
#include <sstream>

#include "oscloc/error.hpp"
#include "oscloc/identification.hpp"
#include "oscloc/reduction.hpp"
#include "oscloc/report.hpp"
#include "oscloc/simulator.hpp"

namespace oscloc {

namespace {

RunWindow window_from_json(const nlohmann::json& j, const std::string& where) {
  RunWindow w;
  try {
    w.duration = j.at("duration").get<double>();
    w.rate = j.at("rate").get<double>();
    w.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("scenario." + where + ": " + e.what());
  }
  return w;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw Error(std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

void Scenario::validate() const {
  for (const RunWindow* w : {&ambient, &event}) {
    if (!(w->rate > 0.0) || !(w->duration > 0.0)) {
      throw ValidationError("scenario '" + name + "': rates and durations must be positive");
    }
  }
  if (!(sigma > 0.0)) throw ValidationError("scenario '" + name + "': sigma must be positive");
  forcing.validate();
  if (band && !(band->first <= band->second)) {
    throw ValidationError("scenario '" + name + "': band fmin must not exceed fmax");
  }
}

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  Scenario s;
  try {
    s.name = doc.value("name", std::string{});
    s.case_path = base_dir / doc.at("case").get<std::string>();
    s.ambient = window_from_json(doc.at("ambient"), "ambient");
    s.event = window_from_json(doc.at("event"), "event");
    s.forcing = forcing_from_json(doc.at("event").at("forcing"));
    s.sigma = doc.at("sigma").get<double>();
    s.output_dir = base_dir / doc.value("output_dir", std::string("out/") + s.name);
    if (doc.contains("band")) {
      s.band = {doc.at("band").at(0).get<double>(), doc.at("band").at(1).get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  Scenario s = parse_scenario(doc, path.parent_path());
  s.hash = content_hash(bytes);
  return s;
}

ScenarioOutcome run_scenario(const Scenario& scenario, unsigned threads) {
  scenario.validate();
  const OutputTag tag{scenario.hash};
  const auto& dir = scenario.output_dir;

  const GridCase grid = stage("load case", [&] { return load_case(scenario.case_path); });
  const ReducedModel model = stage("reduce", [&] { return kron_reduce(build_laplacian(grid)); });
  const DynParams truth = stage("case parameters", [&] { return true_params(grid, scenario.sigma); });
  std::filesystem::create_directories(dir);

  auto stamp = [&](Trajectory& t, const char* role) {
    t.meta["case"] = grid.name;
    t.meta["role"] = role;
    t.meta["tool"] = tag.to_json();
  };

  Trajectory ambient = stage("simulate ambient", [&] {
    SimulationOptions opts{scenario.ambient.duration, scenario.ambient.rate, scenario.ambient.seed};
    return simulate_reduced(model, truth, std::nullopt, opts);
  });
  stamp(ambient, "ambient");
  stage("write ambient", [&] {
    write_trajectory(ambient, dir / "ambient.csv", tag.comment());
    return 0;
  });

  ScenarioOutcome out;
  out.learned = stage("learn", [&] {
    const MomentEstimates mom = empirical_moments(ambient);
    DynParams p = extract_params(mom, model);
    nlohmann::json doc = params_report(p, mom, model.gen_ids);
    doc["tool"] = tag.to_json();
    write_json(dir / "params.json", doc);
    return p;
  });

  Trajectory event = stage("simulate event", [&] {
    SimulationOptions opts{scenario.event.duration, scenario.event.rate, scenario.event.seed};
    return simulate_reduced(model, truth, scenario.forcing, opts);
  });
  stamp(event, "event");
  stage("write event", [&] {
    write_trajectory(event, dir / "event.csv", tag.comment());
    return 0;
  });

  out.scan = stage("localize", [&] {
    std::optional<BinRange> bins;
    if (scenario.band) {
      bins = band_bins(event.n_samples() - 1, event.dt, scenario.band->first, scenario.band->second);
    }
    const SpectralCache cache = spectral_stats(event, bins);
    ScanOptions opts;
    opts.threads = threads;
    return scan(cache, model, out.learned, opts);
  });

  stage("report", [&] {
    write_scan_csv(out.scan, dir / "scan.csv", tag);
    emit_report(out.scan, event, dir, tag);
    out.summary = scan_summary(out.scan, tag);
    out.summary["scenario"] = scenario.name;
    out.summary["truth"] = to_json(scenario.forcing);
    out.summary["learned_params"] = params_to_json(out.learned, model.gen_ids);
    write_json(dir / "summary.json", out.summary);
    return 0;
  });
  return out;
}

}  // namespace oscloc
