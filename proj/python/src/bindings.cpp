#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "oscloc/oscloc.hpp"

namespace py = pybind11;
using namespace oscloc;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::handle& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

std::optional<ForcingSpec> to_forcing(const py::object& obj) {
  if (obj.is_none()) return std::nullopt;
  if (py::isinstance<py::str>(obj)) return parse_forcing(obj.cast<std::string>());
  return forcing_from_json(from_py(obj));
}

ReducedModel reduce(const GridCase& grid) { return kron_reduce(build_laplacian(grid)); }

// Column arrays for the scan table, in ranking order.
py::dict scan_table(const ScanResult& r) {
  const auto n = static_cast<py::ssize_t>(r.ranking.size());
  py::array_t<int> bus(n);
  py::array_t<long> k(n);
  py::array_t<double> freq(n), loglik(n), gamma(n), phi(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const ScanEntry& e = r.entries[r.ranking[static_cast<std::size_t>(i)]];
    bus.mutable_at(i) = e.source;
    k.mutable_at(i) = static_cast<long>(e.bin);
    freq.mutable_at(i) = e.frequency;
    loglik.mutable_at(i) = e.loglik;
    gamma.mutable_at(i) = e.gamma_hat;
    phi.mutable_at(i) = e.phi_hat;
  }
  py::dict d;
  d["bus_id"] = bus;
  d["k"] = k;
  d["freq_hz"] = freq;
  d["loglik"] = loglik;
  d["gamma_hat"] = gamma;
  d["phi_hat"] = phi;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Forced-oscillation source localization";
  m.attr("__version__") = tool_version();

  auto base = py::register_exception<Error>(m, "OsclocError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IdentificationError>(m, "IdentificationError", numerical.ptr());

  py::class_<GridCase>(m, "Case")
      .def_readonly("name", &GridCase::name)
      .def_property_readonly("generator_ids", &GridCase::generator_ids)
      .def_property_readonly("load_ids", &GridCase::load_ids)
      .def_property_readonly("bus_ids", &GridCase::canonical_ids)
      .def("to_json", [](const GridCase& g) { return to_py(to_json(g)); })
      .def("__repr__", [](const GridCase& g) {
        return "<Case " + g.name + ": " + std::to_string(g.buses.size()) + " buses, " +
               std::to_string(g.lines.size()) + " lines>";
      });
  m.def("load_case", &load_case, py::arg("path"));
  m.def("parse_case", [](const py::object& doc) { return parse_case(from_py(doc)); }, py::arg("doc"),
        "Case from a dict with the case-file layout.");

  py::class_<ReducedModel>(m, "ReducedModel")
      .def_readonly("l_reduced", &ReducedModel::l_reduced)
      .def_readonly("sigma_shape", &ReducedModel::sigma_shape)
      .def_readonly("gamma", &ReducedModel::gamma)
      .def_readonly("p_reduced", &ReducedModel::p_reduced)
      .def_readonly("gen_ids", &ReducedModel::gen_ids)
      .def_readonly("load_ids", &ReducedModel::load_ids)
      .def_property_readonly("bus_ids", &ReducedModel::bus_ids)
      .def("forcing_gain", [](const ReducedModel& r, BusId id) { return forcing_gain(r, id); })
      .def("degeneracy_groups", [](const ReducedModel& r, double tol) { return degeneracy_groups(r, tol); },
           py::arg("tol") = 1e-10)
      .def("to_json", [](const ReducedModel& r) { return to_py(to_json(r)); });
  m.def("reduce", &reduce, py::arg("case"));

  py::class_<DynParams>(m, "Params")
      .def_readonly("inertia", &DynParams::inertia)
      .def_readonly("damping", &DynParams::damping)
      .def_readonly("sigma", &DynParams::sigma);
  m.def("true_params", &true_params, py::arg("case"), py::arg("sigma"));
  m.def("params_from_json", [](const py::object& doc, const BusIds& ids) { return params_from_json(from_py(doc), ids); },
        py::arg("doc"), py::arg("gen_ids"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("t0", &Trajectory::t0)
      .def_readonly("gen_ids", &Trajectory::gen_ids)
      .def_readonly("theta", &Trajectory::theta)
      .def_readonly("omega", &Trajectory::omega)
      .def_property_readonly("n_samples", &Trajectory::n_samples)
      .def_property_readonly("meta", [](const Trajectory& t) { return to_py(t.meta); })
      .def("save", [](const Trajectory& t, const std::filesystem::path& p) { write_trajectory(t, p); });
  m.def("read_trajectory", &read_trajectory, py::arg("path"));

  m.def(
      "simulate",
      [](const GridCase& grid, double duration, double rate, double sigma, std::uint64_t seed,
         const py::object& forcing, bool full_dae, double burn_in) {
        SimulationOptions o;
        o.duration = duration;
        o.rate = rate;
        o.seed = seed;
        o.burn_in = burn_in;
        const auto f = to_forcing(forcing);
        const DynParams p = true_params(grid, sigma);
        py::gil_scoped_release release;
        return full_dae ? simulate_full_dae(grid, p, f, o) : simulate_reduced(reduce(grid), p, f, o);
      },
      py::arg("case"), py::arg("duration"), py::arg("rate") = 50.0, py::arg("sigma") = 0.2, py::arg("seed") = 1,
      py::arg("forcing") = py::none(), py::arg("full_dae") = false, py::arg("burn_in") = 0.0,
      "Simulate with the case's true inertia and damping. `forcing` is a spec string or dict.");

  m.def(
      "learn",
      [](const ReducedModel& model, const Trajectory& traj) {
        const MomentEstimates mom = empirical_moments(traj);
        const DynParams p = extract_params(mom, model);
        return py::make_tuple(p, to_py(params_report(p, mom, model.gen_ids)));
      },
      py::arg("model"), py::arg("traj"), "Returns (Params, params.json document).");

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("winner_group", &ScanResult::winner_group)
      .def_readonly("sigma", &ScanResult::sigma)
      .def("__len__", [](const ScanResult& r) { return r.entries.size(); })
      .def("table", &scan_table, "Column arrays, best hypothesis first.")
      .def("summary", [](const ScanResult& r) { return to_py(scan_summary(r, OutputTag{})); });

  m.def(
      "localize",
      [](const ReducedModel& model, const DynParams& params, const Trajectory& traj,
         std::optional<std::pair<double, double>> band, BusIds candidates, unsigned threads) {
        py::gil_scoped_release release;
        std::optional<BinRange> bins;
        if (band) bins = band_bins(traj.n_samples() - 1, traj.dt, band->first, band->second);
        const SpectralCache cache = spectral_stats(traj, bins);
        ScanOptions opts;
        opts.candidates = std::move(candidates);
        opts.threads = threads;
        return scan(cache, model, params, opts);
      },
      py::arg("model"), py::arg("params"), py::arg("traj"), py::arg("band") = py::none(),
      py::arg("candidates") = BusIds{}, py::arg("threads") = 0);

  m.def(
      "run_scenario",
      [](const std::filesystem::path& path, std::optional<std::filesystem::path> output_dir, unsigned threads) {
        Scenario s = load_scenario(path);
        if (output_dir) s.output_dir = *output_dir;
        ScenarioOutcome out;
        {
          py::gil_scoped_release release;
          out = run_scenario(s, threads);
        }
        return to_py(out.summary);
      },
      py::arg("path"), py::arg("output_dir") = py::none(), py::arg("threads") = 0,
      "Runs a scenario file end to end and returns its summary.");
}
