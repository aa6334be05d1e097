#include "oscloc/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "oscloc/error.hpp"

#ifndef OSCLOC_VERSION
#define OSCLOC_VERSION "0.0.0"
#endif

namespace oscloc {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

nlohmann::json entry_json(const ScanEntry& e) {
  return {{"bus_id", e.source},       {"k", e.bin},
          {"freq_hz", e.frequency},   {"loglik", e.loglik},
          {"gamma_hat", e.gamma_hat}, {"phi_hat", e.phi_hat}};
}

}  // namespace

std::string tool_version() { return OSCLOC_VERSION; }

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string OutputTag::comment() const {
  std::string s = "oscloc " + tool_version();
  if (!scenario_hash.empty()) s += " scenario=" + scenario_hash;
  return s;
}

nlohmann::json OutputTag::to_json() const {
  nlohmann::json j{{"name", "oscloc"}, {"version", tool_version()}};
  j["scenario_hash"] = scenario_hash.empty() ? nlohmann::json(nullptr) : nlohmann::json(scenario_hash);
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path,
                    const OutputTag& tag, std::optional<std::size_t> top) {
  if (scan.empty()) throw Error("empty scan");
  auto out = open_out(path);
  out << "# " << tag.comment() << '\n';
  out << "bus_id,k,freq_hz,loglik,gamma_hat,phi_hat\n";
  const std::size_t rows = std::min(scan.ranking.size(), top.value_or(scan.ranking.size()));
  for (std::size_t i = 0; i < rows; ++i) {
    const ScanEntry& e = scan.entries[scan.ranking[i]];
    out << e.source << ',' << e.bin << ',' << fmt17(e.frequency) << ',' << fmt17(e.loglik) << ','
        << fmt17(e.gamma_hat) << ',' << fmt17(e.phi_hat) << '\n';
  }
}

nlohmann::json scan_summary(const ScanResult& scan, const OutputTag& tag) {
  if (scan.empty()) throw Error("empty scan");
  nlohmann::json j;
  j["tool"] = tag.to_json();
  j["winner"] = entry_json(scan.top());
  j["winner_group"] = scan.winner_group;
  const ScanEntry* second = scan.runner_up();
  j["runner_up"] = second ? entry_json(*second) : nlohmann::json(nullptr);
  j["runner_up_gap"] = scan.runner_up_gap();
  j["sigma"] = scan.sigma;
  j["n_hypotheses"] = scan.entries.size();
  return j;
}

void emit_report(const ScanResult& scan, const Trajectory& traj, const std::filesystem::path& dir,
                 const OutputTag& tag) {
  if (scan.empty()) throw Error("empty scan");
  std::filesystem::create_directories(dir);

  std::set<BusId> sources;
  std::map<Index, double> freq;
  for (const auto& e : scan.entries) {
    sources.insert(e.source);
    freq[e.bin] = e.frequency;
  }
  std::map<std::pair<BusId, Index>, double> loglik;
  for (const auto& e : scan.entries) loglik[{e.source, e.bin}] = e.loglik;

  {
    auto out = open_out(dir / "loglik_vs_freq.csv");
    out << "# " << tag.comment() << '\n' << "k,freq_hz";
    for (BusId s : sources) out << ",bus_" << s;
    out << '\n';
    for (const auto& [k, f] : freq) {
      out << k << ',' << fmt17(f);
      for (BusId s : sources) out << ',' << fmt17(loglik.at({s, k}));
      out << '\n';
    }
  }

  {
    // Same aligned window as the scan: samples 0..N-2.
    const Index n = traj.n_samples() - 1;
    const ComplexMatrix spec = half_spectrum(traj.omega.topRows(n));
    auto out = open_out(dir / "spectrum.csv");
    out << "# " << tag.comment() << '\n' << "k,freq_hz";
    for (BusId id : traj.gen_ids) out << ",omega_abs_" << id;
    out << '\n';
    for (const auto& [k, f] : freq) {
      if (k >= spec.rows()) throw ValidationError("trajectory is shorter than the scanned bins");
      out << k << ',' << fmt17(f);
      for (Index g = 0; g < spec.cols(); ++g) out << ',' << fmt17(std::abs(spec(k, g)));
      out << '\n';
    }
  }

  write_json(dir / "summary.json", scan_summary(scan, tag));
}

}  // namespace oscloc
