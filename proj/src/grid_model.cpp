#include "oscloc/grid_model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "oscloc/error.hpp"

namespace oscloc {

namespace {

BusIds sorted_ids(const GridCase& grid, BusKind kind) {
  BusIds ids;
  for (const auto& b : grid.buses) {
    if (b.kind == kind) ids.push_back(b.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string field_context(const std::string& where, const std::string& field) {
  return where + "." + field;
}

template <typename T>
T required(const nlohmann::json& obj, const std::string& where, const std::string& field) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw ParseError("missing field '" + field_context(where, field) + "'");
  }
  try {
    return obj.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad value for '" + field_context(where, field) + "': " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const nlohmann::json& obj, const std::string& where,
                                const std::string& field) {
  if (!obj.contains(field) || obj.at(field).is_null()) return std::nullopt;
  try {
    return obj.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad value for '" + field_context(where, field) + "': " + e.what());
  }
}

}  // namespace

BusIds GridCase::generator_ids() const { return sorted_ids(*this, BusKind::Generator); }

BusIds GridCase::load_ids() const { return sorted_ids(*this, BusKind::Load); }

BusIds GridCase::canonical_ids() const {
  BusIds ids = generator_ids();
  const BusIds loads = load_ids();
  ids.insert(ids.end(), loads.begin(), loads.end());
  return ids;
}

bool GridCase::has_bus(BusId id) const {
  return std::any_of(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
}

const Bus& GridCase::bus(BusId id) const {
  auto it = std::find_if(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
  if (it == buses.end()) throw ValidationError("unknown bus id " + std::to_string(id));
  return *it;
}

void validate(const GridCase& grid) {
  if (grid.buses.empty()) throw ValidationError("case has no buses");

  std::set<BusId> ids;
  for (const auto& b : grid.buses) {
    if (!ids.insert(b.id).second) {
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    }
    if (!(b.voltage_mag > 0.0)) {
      throw ValidationError("bus " + std::to_string(b.id) + ": voltage_mag must be positive");
    }
    if (b.is_generator()) {
      if (b.inertia && !(*b.inertia > 0.0)) {
        throw ValidationError("generator " + std::to_string(b.id) + ": inertia must be positive");
      }
      if (b.damping && !(*b.damping > 0.0)) {
        throw ValidationError("generator " + std::to_string(b.id) + ": damping must be positive");
      }
    } else if (b.inertia || b.damping) {
      throw ValidationError("load bus " + std::to_string(b.id) +
                            " must not carry inertia or damping");
    }
  }
  if (grid.generator_ids().empty()) throw ValidationError("case has no generator bus");

  std::set<std::pair<BusId, BusId>> pairs;
  for (const auto& l : grid.lines) {
    const std::string tag = "line " + std::to_string(l.from) + "-" + std::to_string(l.to);
    if (l.from == l.to) throw ValidationError(tag + ": self loop");
    if (!ids.count(l.from) || !ids.count(l.to)) throw ValidationError(tag + ": unknown bus");
    if (!(l.susceptance > 0.0)) throw ValidationError(tag + ": susceptance must be positive");
    if (!pairs.insert({std::min(l.from, l.to), std::max(l.from, l.to)}).second) {
      throw ValidationError(tag + ": duplicate line (parallel lines must be merged)");
    }
  }

  // Connectivity by union-find over the bus ids.
  std::map<BusId, BusId> parent;
  for (BusId id : ids) parent[id] = id;
  auto find = [&parent](BusId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& l : grid.lines) parent[find(l.from)] = find(l.to);
  const BusId root = find(*ids.begin());
  for (BusId id : ids) {
    if (find(id) != root) {
      throw ValidationError("grid is disconnected: bus " + std::to_string(id) +
                            " is not connected to bus " + std::to_string(*ids.begin()));
    }
  }
}

GridCase parse_case(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("case file must be a JSON object");
  GridCase grid;
  grid.name = optional_field<std::string>(doc, "case", "name").value_or("");

  if (!doc.contains("buses") || !doc.at("buses").is_array()) {
    throw ParseError("missing array 'buses'");
  }
  std::size_t i = 0;
  for (const auto& jb : doc.at("buses")) {
    const std::string where = "buses[" + std::to_string(i++) + "]";
    Bus b;
    b.id = required<int>(jb, where, "id");
    const auto kind = required<std::string>(jb, where, "kind");
    if (kind == "generator") {
      b.kind = BusKind::Generator;
    } else if (kind == "load") {
      b.kind = BusKind::Load;
    } else {
      throw ParseError("bad value for '" + where + ".kind': expected \"generator\" or \"load\"");
    }
    b.power = optional_field<double>(jb, where, "power").value_or(0.0);
    b.voltage_mag = optional_field<double>(jb, where, "voltage_mag").value_or(1.0);
    b.inertia = optional_field<double>(jb, where, "inertia");
    b.damping = optional_field<double>(jb, where, "damping");
    grid.buses.push_back(b);
  }

  if (!doc.contains("lines") || !doc.at("lines").is_array()) {
    throw ParseError("missing array 'lines'");
  }
  i = 0;
  for (const auto& jl : doc.at("lines")) {
    const std::string where = "lines[" + std::to_string(i++) + "]";
    Line l;
    l.from = required<int>(jl, where, "from");
    l.to = required<int>(jl, where, "to");
    l.susceptance = required<double>(jl, where, "susceptance");
    grid.lines.push_back(l);
  }

  validate(grid);
  return grid;
}

GridCase parse_case_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("case JSON: ") + e.what());
  }
  return parse_case(doc);
}

GridCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open case file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_case_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const GridCase& grid) {
  nlohmann::json doc;
  doc["name"] = grid.name;
  doc["buses"] = nlohmann::json::array();
  for (const auto& b : grid.buses) {
    nlohmann::json jb{{"id", b.id},
                      {"kind", b.is_generator() ? "generator" : "load"},
                      {"power", b.power},
                      {"voltage_mag", b.voltage_mag}};
    if (b.inertia) jb["inertia"] = *b.inertia;
    if (b.damping) jb["damping"] = *b.damping;
    doc["buses"].push_back(jb);
  }
  doc["lines"] = nlohmann::json::array();
  for (const auto& l : grid.lines) {
    doc["lines"].push_back({{"from", l.from}, {"to", l.to}, {"susceptance", l.susceptance}});
  }
  return doc;
}

LaplacianBlocks build_laplacian(const GridCase& grid) {
  LaplacianBlocks out;
  out.gen_ids = grid.generator_ids();
  out.load_ids = grid.load_ids();
  const BusIds order = grid.canonical_ids();
  const Index n = static_cast<Index>(order.size());
  const Index ng = out.num_generators();
  const Index nl = out.num_loads();

  std::map<BusId, Index> pos;
  for (Index i = 0; i < n; ++i) pos[order[static_cast<std::size_t>(i)]] = i;

  out.full = Matrix::Zero(n, n);
  for (const auto& l : grid.lines) {
    const Index i = pos.at(l.from);
    const Index j = pos.at(l.to);
    const double coupling = grid.bus(l.from).voltage_mag * grid.bus(l.to).voltage_mag * l.susceptance;
    out.full(i, j) -= coupling;
    out.full(j, i) -= coupling;
    out.full(i, i) += coupling;
    out.full(j, j) += coupling;
  }

  out.power.resize(n);
  for (Index i = 0; i < n; ++i) out.power(i) = grid.bus(order[static_cast<std::size_t>(i)]).power;

  out.gg = out.full.topLeftCorner(ng, ng);
  out.gl = out.full.topRightCorner(ng, nl);
  out.lg = out.full.bottomLeftCorner(nl, ng);
  out.ll = out.full.bottomRightCorner(nl, nl);
  return out;
}

}  // namespace oscloc
