#include "oscloc/params.hpp"

#include <cmath>
#include <sstream>

#include "oscloc/error.hpp"

namespace oscloc {

void DynParams::validate() const {
  if (inertia.size() != damping.size()) {
    throw ValidationError("inertia and damping have different lengths");
  }
  for (Index i = 0; i < inertia.size(); ++i) {
    if (!(inertia(i) > 0.0) || !std::isfinite(inertia(i))) {
      throw ValidationError("inertia[" + std::to_string(i) + "] must be positive");
    }
    if (!(damping(i) > 0.0) || !std::isfinite(damping(i))) {
      throw ValidationError("damping[" + std::to_string(i) + "] must be positive");
    }
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be >= 0");
}

DynParams true_params(const GridCase& grid, double sigma) {
  const BusIds gens = grid.generator_ids();
  DynParams p;
  p.inertia.resize(static_cast<Index>(gens.size()));
  p.damping.resize(static_cast<Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Bus& b = grid.bus(gens[i]);
    if (!b.inertia || !b.damping) {
      throw ValidationError("generator " + std::to_string(b.id) +
                            " has no inertia/damping in case '" + grid.name + "'");
    }
    p.inertia(static_cast<Index>(i)) = *b.inertia;
    p.damping(static_cast<Index>(i)) = *b.damping;
  }
  p.sigma = sigma;
  p.validate();
  return p;
}

void ForcingSpec::validate() const {
  if (!(amplitude >= 0.0)) throw ValidationError("forcing amplitude must be >= 0");
  if (!(frequency > 0.0)) throw ValidationError("forcing frequency must be > 0");
  if (!(phase >= 0.0 && phase < 1.0)) throw ValidationError("forcing phase must lie in [0, 1)");
}

ForcingSpec parse_forcing(const std::string& text) {
  ForcingSpec f;
  bool has_source = false, has_freq = false, has_amp = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("forcing: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "source") {
        f.source = std::stoi(value);
        has_source = true;
      } else if (key == "freq") {
        f.frequency = std::stod(value);
        has_freq = true;
      } else if (key == "amp") {
        f.amplitude = std::stod(value);
        has_amp = true;
      } else if (key == "phase") {
        f.phase = std::stod(value);
      } else {
        throw ParseError("forcing: unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError("forcing: bad number for '" + key + "'");
    }
  }
  if (!has_source || !has_freq || !has_amp) {
    throw ParseError("forcing: source, freq and amp are required");
  }
  f.validate();
  return f;
}

nlohmann::json to_json(const ForcingSpec& f) {
  return {{"source", f.source}, {"amplitude", f.amplitude}, {"frequency", f.frequency},
          {"phase", f.phase}};
}

ForcingSpec forcing_from_json(const nlohmann::json& j) {
  ForcingSpec f;
  try {
    f.source = j.at("source").get<int>();
    f.amplitude = j.at("amplitude").get<double>();
    f.frequency = j.at("frequency").get<double>();
    f.phase = j.value("phase", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("forcing: ") + e.what());
  }
  f.validate();
  return f;
}

nlohmann::json params_to_json(const DynParams& p, const BusIds& gen_ids) {
  nlohmann::json j;
  j["inertia"] = nlohmann::json::object();
  j["damping"] = nlohmann::json::object();
  for (std::size_t i = 0; i < gen_ids.size(); ++i) {
    const std::string key = std::to_string(gen_ids[i]);
    j["inertia"][key] = p.inertia(static_cast<Index>(i));
    j["damping"][key] = p.damping(static_cast<Index>(i));
  }
  j["sigma"] = p.sigma;
  return j;
}

DynParams params_from_json(const nlohmann::json& j, const BusIds& gen_ids) {
  DynParams p;
  p.inertia.resize(static_cast<Index>(gen_ids.size()));
  p.damping.resize(static_cast<Index>(gen_ids.size()));
  try {
    for (std::size_t i = 0; i < gen_ids.size(); ++i) {
      const std::string key = std::to_string(gen_ids[i]);
      if (!j.at("inertia").contains(key) || !j.at("damping").contains(key)) {
        throw ParseError("params: no entry for generator " + key);
      }
      p.inertia(static_cast<Index>(i)) = j.at("inertia").at(key).get<double>();
      p.damping(static_cast<Index>(i)) = j.at("damping").at(key).get<double>();
    }
    p.sigma = j.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace oscloc
