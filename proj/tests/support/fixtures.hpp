#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oscloc/oscloc.hpp"

namespace fixtures {

using namespace oscloc;

inline std::filesystem::path source_dir() { return OSCLOC_SOURCE_DIR; }
inline std::filesystem::path case_path(const std::string& name) {
  return source_dir() / "cases" / (name + ".json");
}
inline std::filesystem::path scenario_path(const std::string& name) {
  return source_dir() / "scenarios" / (name + ".json");
}

inline Bus generator(BusId id, double m, double d, double p = 0.0) {
  Bus b;
  b.id = id;
  b.kind = BusKind::Generator;
  b.power = p;
  b.inertia = m;
  b.damping = d;
  return b;
}

inline Bus load(BusId id, double p = 0.0) {
  Bus b;
  b.id = id;
  b.kind = BusKind::Load;
  b.power = p;
  return b;
}

// The toy grid: generators 1 and 5 at the ends of a five-bus path.
inline GridCase line5(double b = 1.0, double m1 = 2.0, double m2 = 1.5, double d1 = 0.5,
                      double d2 = 0.8) {
  GridCase g;
  g.name = "line5";
  g.buses = {generator(1, m1, d1), load(2), load(3), load(4), generator(5, m2, d2)};
  for (BusId i = 1; i < 5; ++i) g.lines.push_back({i, i + 1, b});
  return g;
}

inline GridCase two_bus(double b = 1.0) {
  GridCase g;
  g.name = "two_bus";
  g.buses = {generator(1, 1.0, 1.0), generator(2, 1.0, 1.0)};
  g.lines = {{1, 2, b}};
  return g;
}

// Random connected grid: a random spanning tree plus a few chords.
inline GridCase random_grid(std::mt19937_64& rng, int n_gen, int n_load, int extra_lines = 2) {
  std::uniform_real_distribution<double> sus(0.5, 3.0), inertia(1.0, 4.0), damping(0.4, 1.6);
  GridCase g;
  g.name = "random";
  const int n = n_gen + n_load;
  std::vector<BusId> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = 10 + 3 * i;
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int i = 0; i < n; ++i) {
    const BusId id = ids[static_cast<std::size_t>(i)];
    if (i < n_gen) {
      g.buses.push_back(generator(id, inertia(rng), damping(rng)));
    } else {
      g.buses.push_back(load(id));
    }
  }
  auto has_line = [&](BusId a, BusId b) {
    for (const auto& l : g.lines) {
      if ((l.from == a && l.to == b) || (l.from == b && l.to == a)) return true;
    }
    return false;
  };
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    g.lines.push_back({ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(pick(rng))],
                       sus(rng)});
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int t = 0; t < extra_lines * 10 && extra_lines > 0; ++t) {
    const BusId a = ids[static_cast<std::size_t>(any(rng))];
    const BusId b = ids[static_cast<std::size_t>(any(rng))];
    if (a == b || has_line(a, b)) continue;
    g.lines.push_back({a, b, sus(rng)});
    if (--extra_lines == 0) break;
  }
  return g;
}

inline ReducedModel reduce(const GridCase& g) { return kron_reduce(build_laplacian(g)); }

inline SimulationOptions window(double duration, double rate, std::uint64_t seed) {
  SimulationOptions o;
  o.duration = duration;
  o.rate = rate;
  o.seed = seed;
  return o;
}

inline ForcingSpec forcing(BusId source, double amp, double freq, double phase = 0.0) {
  return ForcingSpec{source, amp, freq, phase};
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("oscloc_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace fixtures
