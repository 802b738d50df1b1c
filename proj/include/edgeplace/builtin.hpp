#pragma once

#include <vector>

#include "edgeplace/cost.hpp"
#include "edgeplace/types.hpp"

namespace edgeplace {

// The two bundled case-study scenarios (video-processing, text-processing),
// calibrated against the per-microservice benchmark rows carried in their
// metadata; every calibration constant is recorded there too. Re-validated on
// every call.
std::vector<Scenario> bundled_scenarios();
Scenario bundled_video_scenario();
Scenario bundled_text_scenario();

// One recorded benchmark row: the CT/EC ranges a microservice measured on
// the medium device, plus the posture that reproduces the measurement.
struct BenchmarkRow {
  std::string microservice;
  std::string registry;        // registry the row's image pull used
  double ct_lo_s = 0.0, ct_hi_s = 0.0;
  double ec_lo_j = 0.0, ec_hi_j = 0.0;
  CostBreakdown evaluated;     // this scenario's reproduction of the row
};

// Evaluate every microservice under the scenario's benchmark posture
// (metadata.benchmark): subject on the benchmark device, upstreams on the
// upstream device, cold cache, per-row registry. Ranges come from
// metadata.benchmark.rows.
std::vector<BenchmarkRow> benchmark_rows(const Scenario& scenario);

}  // namespace edgeplace
