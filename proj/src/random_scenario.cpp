#include "edgeplace/random_scenario.hpp"

#include <random>
#include <string>

#include <json.hpp>

#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

// Bounded draws built directly on the mt19937_64 word stream, so generated
// scenarios are identical across standard libraries (std::*_distribution is
// implementation-defined).
int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double draw_real(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

Device draw_device(std::mt19937_64& rng, const std::string& id) {
  Device d;
  d.id = id;
  d.cores = draw_int(rng, 4, 8);
  d.cpu_speed_mips = draw_real(rng, 500.0, 1500.0);
  d.mem_gb = 16.0;
  d.stor_gb = 0.0;  // widened below once the microservices are known
  d.active_power_w = draw_real(rng, 1.0, 10.0);
  d.static_power_w = draw_real(rng, 0.1, 1.0);
  return d;
}

}  // namespace

Scenario random_scenario(std::uint64_t seed, int players, int max_players) {
  if (max_players < 2) {
    throw Error(ErrorCode::InvalidValue, "max_players must be >= 2");
  }
  if (players != 0 && (players < 2 || players > max_players)) {
    throw Error(ErrorCode::InvalidValue,
                "players must be 0 (derive from seed) or in [2, max_players]");
  }
  std::mt19937_64 rng(seed);

  Scenario s;
  s.name = "random-" + std::to_string(seed);
  s.description = "seeded random scenario for property suites";
  s.cache_mode = CacheMode::Cold;

  const int n = players == 0 ? draw_int(rng, 2, max_players) : players;
  double total_footprint_gb = 0.0;
  for (int i = 0; i < n; ++i) {
    Microservice ms;
    ms.id = "ms" + std::to_string(i);
    ms.image_size_gb = draw_real(rng, 0.1, 3.0);
    ms.req.cores = draw_int(rng, 1, 2);
    ms.req.cpu_load_mi = draw_real(rng, 5000.0, 50000.0);
    ms.req.mem_gb = draw_real(rng, 0.5, 2.0);
    ms.req.stor_gb = draw_real(rng, 0.5, 2.0);
    total_footprint_gb += ms.image_size_gb + ms.req.stor_gb;
    s.app.microservices.push_back(std::move(ms));
  }
  // Edges only from lower to higher index: acyclic by construction.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((rng() & 1u) == 0u) continue;
      Dataflow df;
      df.upstream = "ms" + std::to_string(i);
      df.downstream = "ms" + std::to_string(j);
      df.size_mb = draw_real(rng, 10.0, 500.0);
      s.app.dataflows.push_back(std::move(df));
    }
  }

  s.devices.push_back(draw_device(rng, "dev-a"));
  s.devices.push_back(draw_device(rng, "dev-b"));
  // Generous storage: the whole application fits on either device, so every
  // joint profile is finite.
  for (auto& d : s.devices) d.stor_gb = total_footprint_gb + 10.0;

  s.registries.push_back({"hub"});
  s.registries.push_back({"regional"});

  s.links.device_bw[{"dev-a", "dev-b"}] = draw_real(rng, 10.0, 100.0);
  s.links.device_bw[{"dev-b", "dev-a"}] = draw_real(rng, 10.0, 100.0);
  for (const auto& reg : s.registries) {
    for (const auto& dev : s.devices) {
      s.links.registry_bw[{reg.id, dev.id}] = draw_real(rng, 2.0, 20.0);
    }
  }

  s.metadata["generator"] = {{"seed", seed}, {"players", n}};
  return validate(s);
}

Scenario scale_powers(const Scenario& scenario, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "lambda must be > 0");
  }
  Scenario scaled = scenario;
  for (auto& d : scaled.devices) {
    d.active_power_w *= lambda;
    d.static_power_w *= lambda;
  }
  return scaled;
}

}  // namespace edgeplace
