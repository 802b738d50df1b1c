#include "edgeplace/builtin.hpp"

#include <json.hpp>

#include "builtin_scenarios.hpp"
#include "edgeplace/error.hpp"
#include "edgeplace/scenario_io.hpp"

namespace edgeplace {

namespace {

using nlohmann::json;

const json& benchmark_section(const Scenario& scenario) {
  if (!scenario.metadata.is_object() ||
      !scenario.metadata.contains("benchmark")) {
    throw Error(ErrorCode::InvalidValue,
                "scenario \"" + scenario.name +
                    "\" has no metadata.benchmark section");
  }
  return scenario.metadata.at("benchmark");
}

std::string require_string(const json& j, const char* key,
                           const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::ParseError,
                where + "." + key + ": missing or not a string");
  }
  return j.at(key).get<std::string>();
}

std::pair<double, double> require_range(const json& j, const char* key,
                                        const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
    throw Error(ErrorCode::ParseError,
                where + "." + key + ": expected a [lo, hi] pair");
  }
  return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>()};
}

}  // namespace

Scenario bundled_video_scenario() {
  return parse_scenario(detail::kVideoScenarioJson);
}

Scenario bundled_text_scenario() {
  return parse_scenario(detail::kTextScenarioJson);
}

std::vector<Scenario> bundled_scenarios() {
  return {bundled_video_scenario(), bundled_text_scenario()};
}

std::vector<BenchmarkRow> benchmark_rows(const Scenario& scenario) {
  const json& bench = benchmark_section(scenario);
  const std::string where = "metadata.benchmark";
  const std::string device = require_string(bench, "device", where);
  const std::string upstream_device =
      require_string(bench, "upstream_device", where);
  const CacheMode mode =
      bench.contains("cache_mode")
          ? cache_mode_from_string(bench.at("cache_mode").get<std::string>())
          : CacheMode::Cold;
  if (!bench.contains("rows") || !bench.at("rows").is_array()) {
    throw Error(ErrorCode::ParseError, where + ".rows: expected an array");
  }

  std::vector<BenchmarkRow> rows;
  for (const auto& rj : bench.at("rows")) {
    BenchmarkRow row;
    row.microservice = require_string(rj, "microservice", where + ".rows[]");
    row.registry = require_string(rj, "registry", where + ".rows[]");
    std::tie(row.ct_lo_s, row.ct_hi_s) =
        require_range(rj, "ct_range_s", where + ".rows[]");
    std::tie(row.ec_lo_j, row.ec_hi_j) =
        require_range(rj, "ec_range_j", where + ".rows[]");
    if (!scenario.app.find(row.microservice)) {
      throw Error(ErrorCode::InvalidValue,
                  where + ": row names unknown microservice \"" +
                      row.microservice + "\"");
    }

    // Measurement posture: the subject runs on the benchmark device, every
    // other microservice sits on the upstream device. Only the subject's own
    // breakdown is read, so the posture need not be a deployable placement.
    Placement placement;
    for (const auto& ms : scenario.app.microservices) {
      placement.sched[ms.id] =
          ms.id == row.microservice ? device : upstream_device;
      placement.regist[ms.id] = row.registry;
    }
    CacheState cache(mode);
    row.evaluated = energy(row.microservice, scenario, placement, cache);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace edgeplace
