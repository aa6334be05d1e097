// oscloc command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oscloc/oscloc.hpp"

namespace fs = std::filesystem;
using namespace oscloc;

namespace {

struct Globals {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

std::pair<double, double> parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("--band expects fmin:fmax, got '" + text + "'");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ParseError("--band expects fmin:fmax, got '" + text + "'");
  }
}

ReducedModel reduce_case(const GridCase& grid) { return kron_reduce(build_laplacian(grid)); }

struct LocalizeInputs {
  std::string case_path, params_path, traj_path, band;
};

void add_localize_inputs(CLI::App* cmd, LocalizeInputs& in) {
  cmd->add_option("--case", in.case_path, "case JSON")->required();
  cmd->add_option("--params", in.params_path, "params.json from `learn`")->required();
  cmd->add_option("--traj", in.traj_path, "forced trajectory CSV")->required();
  cmd->add_option("--band", in.band, "restrict the scan to fmin:fmax (Hz)");
}

struct Localized {
  Trajectory traj;
  ScanResult scan;
};

Localized run_localize(const LocalizeInputs& in, const Globals& g) {
  const GridCase grid = load_case(in.case_path);
  const ReducedModel model = reduce_case(grid);
  const DynParams params = params_from_json(read_json(in.params_path), model.gen_ids);
  Localized out{read_trajectory(in.traj_path), {}};
  if (out.traj.gen_ids != model.gen_ids) {
    throw ValidationError("trajectory generators do not match the case");
  }
  std::optional<BinRange> bins;
  if (!in.band.empty()) {
    const auto [lo, hi] = parse_band(in.band);
    bins = band_bins(out.traj.n_samples() - 1, out.traj.dt, lo, hi);
  }
  const SpectralCache cache = spectral_stats(out.traj, bins);
  ScanOptions opts;
  opts.threads = g.threads;
  out.scan = scan(cache, model, params, opts);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forced-oscillation source localization from generator measurements"};
  app.set_version_flag("--version", "oscloc " + tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "worker threads for the scan (0: all cores)");
  app.add_option("--seed", g.seed, "noise seed (overrides per-command and scenario seeds)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate generator trajectories");
  std::string sim_case, sim_out, sim_forcing;
  double sim_duration = 0, sim_rate = 50, sim_sigma = 0.2, sim_burn = 0;
  std::uint64_t sim_seed = 1;
  bool sim_dae = false;
  sim->add_option("--case", sim_case, "case JSON")->required();
  sim->add_option("--duration", sim_duration, "recorded window (s)")->required();
  sim->add_option("--rate", sim_rate, "sampling rate (Hz)")->capture_default_str();
  sim->add_option("--sigma", sim_sigma, "noise scale")->capture_default_str();
  sim->add_option("--seed", sim_seed, "noise seed")->capture_default_str();
  sim->add_option("--forcing", sim_forcing, "source=<id>,freq=<Hz>,amp=<gamma>,phase=<cycles>");
  sim->add_flag("--full-dae", sim_dae, "integrate the unreduced network");
  sim->add_option("--burn-in", sim_burn, "seconds simulated and discarded first");
  sim->add_option("-o,--output", sim_out, "trajectory CSV")->required();

  // learn
  auto* learn = app.add_subcommand("learn", "estimate inertia and damping from ambient data");
  std::string learn_case, learn_traj, learn_out;
  learn->add_option("--case", learn_case, "case JSON")->required();
  learn->add_option("--traj", learn_traj, "ambient trajectory CSV")->required();
  learn->add_option("-o,--output", learn_out, "params.json")->required();

  // reduce
  auto* red = app.add_subcommand("reduce", "print the Kron-reduced model");
  std::string red_case, red_out;
  red->add_option("--case", red_case, "case JSON")->required();
  red->add_option("-o,--output", red_out, "output JSON (default: stdout)");

  // localize
  auto* loc = app.add_subcommand("localize", "scan every (source, frequency) hypothesis");
  LocalizeInputs loc_in;
  std::string loc_out;
  std::size_t loc_top = 0;
  add_localize_inputs(loc, loc_in);
  loc->add_option("--top", loc_top, "keep only the K best rows");
  loc->add_option("-o,--output", loc_out, "scan CSV; summary goes to <stem>.summary.json")->required();

  // report
  auto* rep = app.add_subcommand("report", "write plot-ready loglik and spectrum tables");
  LocalizeInputs rep_in;
  std::string rep_dir;
  add_localize_inputs(rep, rep_in);
  rep->add_option("-o,--output", rep_dir, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "run a scenario end to end");
  std::string run_file, run_dir;
  run->add_option("scenario", run_file, "scenario JSON")->required();
  run->add_option("-o,--output", run_dir, "output directory (default: from the scenario)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const GridCase grid = load_case(sim_case);
      const DynParams params = true_params(grid, sim_sigma);
      SimulationOptions opts{sim_duration, sim_rate, g.seed.value_or(sim_seed), sim_burn};
      std::optional<ForcingSpec> forcing;
      if (!sim_forcing.empty()) forcing = parse_forcing(sim_forcing);
      Trajectory traj = sim_dae ? simulate_full_dae(grid, params, forcing, opts)
                                : simulate_reduced(reduce_case(grid), params, forcing, opts);
      traj.meta["case"] = grid.name;
      traj.meta["tool"] = OutputTag{}.to_json();
      write_trajectory(traj, sim_out, OutputTag{}.comment());
    } else if (*learn) {
      const ReducedModel model = reduce_case(load_case(learn_case));
      const Trajectory traj = read_trajectory(learn_traj);
      if (traj.gen_ids != model.gen_ids) {
        throw ValidationError("trajectory generators do not match the case");
      }
      const MomentEstimates mom = empirical_moments(traj);
      const DynParams params = extract_params(mom, model);
      nlohmann::json doc = params_report(params, mom, model.gen_ids);
      doc["tool"] = OutputTag{}.to_json();
      write_json(learn_out, doc);
    } else if (*red) {
      nlohmann::json doc = to_json(reduce_case(load_case(red_case)));
      doc["tool"] = OutputTag{}.to_json();
      if (red_out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        write_json(red_out, doc);
      }
    } else if (*loc) {
      const Localized res = run_localize(loc_in, g);
      const OutputTag tag;
      std::optional<std::size_t> top;
      if (loc_top > 0) top = loc_top;
      write_scan_csv(res.scan, loc_out, tag, top);
      fs::path summary = loc_out;
      summary.replace_extension(".summary.json");
      write_json(summary, scan_summary(res.scan, tag));
    } else if (*rep) {
      const Localized res = run_localize(rep_in, g);
      emit_report(res.scan, res.traj, rep_dir, OutputTag{});
    } else if (*run) {
      Scenario sc = load_scenario(run_file);
      if (g.seed) {
        sc.ambient.seed = *g.seed;
        sc.event.seed = *g.seed + 1;
      }
      if (!run_dir.empty()) sc.output_dir = run_dir;
      const ScenarioOutcome out = run_scenario(sc, g.threads);
      const auto& w = out.summary.at("winner");
      std::printf("winner: bus %d at %.6g Hz (k=%lld)\n", w.at("bus_id").get<int>(),
                  w.at("freq_hz").get<double>(), static_cast<long long>(w.at("k").get<Index>()));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "oscloc: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
