#include "oscloc/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "oscloc/error.hpp"

namespace oscloc {

Matrix Trajectory::states() const {
  Matrix x(n_samples(), 2 * num_generators());
  x << theta, omega;
  return x;
}

void Trajectory::validate() const {
  if (!(dt > 0.0)) throw ValidationError("trajectory dt must be positive");
  if (n_samples() < 2) throw ValidationError("trajectory needs at least 2 samples");
  if (omega.rows() != theta.rows() || omega.cols() != theta.cols()) {
    throw ValidationError("theta and omega shapes differ");
  }
  if (static_cast<Index>(gen_ids.size()) != theta.cols()) {
    throw ValidationError("gen_ids does not match the number of columns");
  }
  if (!theta.allFinite() || !omega.allFinite()) {
    throw ValidationError("trajectory contains non-finite values");
  }
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                      const std::string& comment) {
  traj.validate();
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory " + path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  out << 't';
  for (BusId id : traj.gen_ids) out << ",theta_" << id;
  for (BusId id : traj.gen_ids) out << ",omega_" << id;
  out << '\n';
  for (Index i = 0; i < traj.n_samples(); ++i) {
    out << fmt17(traj.t0 + static_cast<double>(i) * traj.dt);
    for (Index g = 0; g < traj.num_generators(); ++g) out << ',' << fmt17(traj.theta(i, g));
    for (Index g = 0; g < traj.num_generators(); ++g) out << ',' << fmt17(traj.omega(i, g));
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());

  nlohmann::json meta = traj.meta;
  meta["dt"] = traj.dt;
  meta["t0"] = traj.t0;
  meta["n_samples"] = traj.n_samples();
  meta["gen_ids"] = traj.gen_ids;
  std::ofstream mout(meta_path(path));
  if (!mout) throw Error("cannot write " + meta_path(path).string());
  mout << meta.dump(2) << '\n';
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trajectory " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  const std::string where = path.string() + ":" + std::to_string(line_no);
  if (header.empty() || header[0] != "t") throw ParseError(where + ": header must start with 't'");
  if ((header.size() - 1) % 2 != 0 || header.size() < 3) {
    throw ParseError(where + ": expected t, theta_<id>..., omega_<id>... columns");
  }
  const std::size_t ng = (header.size() - 1) / 2;

  Trajectory traj;
  for (std::size_t g = 0; g < ng; ++g) {
    const std::string& th = header[1 + g];
    const std::string& om = header[1 + ng + g];
    if (th.rfind("theta_", 0) != 0) throw ParseError(where + ": expected theta column, got '" + th + "'");
    if (om.rfind("omega_", 0) != 0) throw ParseError(where + ": expected omega column, got '" + om + "'");
    try {
      const int id = std::stoi(th.substr(6));
      if (std::stoi(om.substr(6)) != id) {
        throw ParseError(where + ": omega columns do not match theta columns");
      }
      traj.gen_ids.push_back(id);
    } catch (const std::logic_error&) {
      throw ParseError(where + ": bad generator id in header");
    }
  }

  std::vector<double> t;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns, got " +
                       std::to_string(cells.size()));
    }
    try {
      t.push_back(std::stod(cells[0]));
      for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(std::stod(cells[c]));
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  const Index n = static_cast<Index>(t.size());
  if (n < 2) throw ParseError(path.string() + ": need at least 2 data rows");

  traj.theta.resize(n, static_cast<Index>(ng));
  traj.omega.resize(n, static_cast<Index>(ng));
  for (Index i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < ng; ++g) {
      traj.theta(i, static_cast<Index>(g)) = values[static_cast<std::size_t>(i) * 2 * ng + g];
      traj.omega(i, static_cast<Index>(g)) = values[static_cast<std::size_t>(i) * 2 * ng + ng + g];
    }
  }
  traj.t0 = t.front();
  traj.dt = (t.back() - t.front()) / static_cast<double>(n - 1);

  const auto mp = meta_path(path);
  if (std::filesystem::exists(mp)) {
    std::ifstream min(mp);
    try {
      traj.meta = nlohmann::json::parse(min);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(mp.string() + ": " + e.what());
    }
    if (traj.meta.contains("dt")) traj.dt = traj.meta["dt"].get<double>();
    if (traj.meta.contains("t0")) traj.t0 = traj.meta["t0"].get<double>();
    if (traj.meta.contains("gen_ids") && traj.meta["gen_ids"].get<BusIds>() != traj.gen_ids) {
      throw ParseError(mp.string() + ": gen_ids disagree with the CSV header");
    }
    for (const char* k : {"dt", "t0", "n_samples", "gen_ids"}) traj.meta.erase(k);
  }
  traj.validate();
  return traj;
}

}  // namespace oscloc
