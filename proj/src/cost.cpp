#include "edgeplace/cost.hpp"

#include <algorithm>
#include <map>

#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

constexpr double kMbPerGb = 1000.0;

const std::string& placed_device(const Placement& placement,
                                 const std::string& ms_id) {
  auto it = placement.sched.find(ms_id);
  if (it == placement.sched.end()) {
    throw Error(ErrorCode::InvalidValue,
                "placement.sched has no entry for \"" + ms_id + "\"");
  }
  return it->second;
}

const std::string& placed_registry(const Placement& placement,
                                   const std::string& ms_id) {
  auto it = placement.regist.find(ms_id);
  if (it == placement.regist.end()) {
    throw Error(ErrorCode::InvalidValue,
                "placement.regist has no entry for \"" + ms_id + "\"");
  }
  return it->second;
}

}  // namespace

double deployment_time(const Microservice& ms, const std::string& registry,
                       const std::string& device, const LinkTable& links,
                       CacheState& cache) {
  if (cache.contains(device, ms.id)) return 0.0;
  const double bw = links.registry_bandwidth(registry, device);
  const double t = ms.image_size_gb * kMbPerGb / bw;
  cache.record(device, ms.id);
  return t;
}

double transfer_time(const Dataflow& df, const std::string& up_device,
                     const std::string& down_device, const LinkTable& links) {
  if (up_device == down_device) return 0.0;
  return df.size_mb / links.device_bandwidth(up_device, down_device);
}

double processing_time(const Microservice& ms, const Device& device) {
  return ms.req.cpu_load_mi / device.cpu_speed_mips;
}

CostBreakdown completion_time(const std::string& ms_id,
                              const Scenario& scenario,
                              const Placement& placement, CacheState& cache) {
  const Microservice* ms = scenario.app.find(ms_id);
  if (!ms) {
    throw Error(ErrorCode::InvalidValue,
                "unknown microservice \"" + ms_id + "\"");
  }
  const std::string& device_id = placed_device(placement, ms_id);
  const Device* device = scenario.find_device(device_id);
  if (!device) {
    throw Error(ErrorCode::InvalidValue,
                "placement maps \"" + ms_id + "\" to unknown device \"" +
                    device_id + "\"");
  }

  CostBreakdown b;
  b.microservice = ms_id;
  b.registry = placed_registry(placement, ms_id);
  b.device = device_id;
  b.t_deploy_s =
      deployment_time(*ms, b.registry, device_id, scenario.links, cache);
  // A barrier receives its inputs one after another: inbound transfers sum,
  // in dataflow-declaration order.
  for (const auto& df : scenario.app.dataflows) {
    if (df.downstream != ms_id) continue;
    b.t_transfer_s += transfer_time(df, placed_device(placement, df.upstream),
                                    device_id, scenario.links);
  }
  b.t_process_s = processing_time(*ms, *device);
  b.ct_s = b.t_deploy_s + b.t_transfer_s + b.t_process_s;
  return b;
}

CostBreakdown energy(const std::string& ms_id, const Scenario& scenario,
                     const Placement& placement, CacheState& cache) {
  CostBreakdown b = completion_time(ms_id, scenario, placement, cache);
  const Device* device = scenario.find_device(b.device);
  b.e_active_j = device->active_power_w * b.ct_s;
  b.e_static_j = device->static_power_w * b.ct_s;
  b.ec_j = b.e_active_j + b.e_static_j;
  return b;
}

EnergyReport total_energy(const Scenario& scenario, const Placement& placement,
                          CacheMode mode) {
  EnergyReport report;
  CacheState cache(mode);
  for (const auto& ms_id : topo_order(scenario.app)) {
    report.breakdown.push_back(energy(ms_id, scenario, placement, cache));
    report.total_j += report.breakdown.back().ec_j;
  }
  return report;
}

double makespan(const Scenario& scenario, const Placement& placement,
                CacheMode mode, MakespanMode style) {
  const auto order = topo_order(scenario.app);
  std::map<std::string, double> ct;
  CacheState cache(mode);
  for (const auto& ms_id : order) {
    ct[ms_id] = completion_time(ms_id, scenario, placement, cache).ct_s;
  }

  if (style == MakespanMode::Serial) {
    double total = 0.0;
    for (const auto& ms_id : order) total += ct[ms_id];
    return total;
  }

  // Critical path: longest chain of ct values (inbound transfer time is
  // already inside each downstream's ct).
  std::map<std::string, double> finish;
  double longest = 0.0;
  for (const auto& ms_id : order) {
    double start = 0.0;
    for (const auto& df : scenario.app.dataflows) {
      if (df.downstream == ms_id) start = std::max(start, finish[df.upstream]);
    }
    finish[ms_id] = start + ct[ms_id];
    longest = std::max(longest, finish[ms_id]);
  }
  return longest;
}

bool joint_storage_ok(const Scenario& scenario, const Placement& placement) {
  std::map<std::string, double> used;
  for (const auto& ms : scenario.app.microservices) {
    used[placed_device(placement, ms.id)] +=
        ms.image_size_gb + ms.req.stor_gb;
  }
  for (const auto& [device_id, gb] : used) {
    const Device* device = scenario.find_device(device_id);
    if (!device || gb > device->stor_gb) return false;
  }
  return true;
}

void validate_placement(const Scenario& scenario, const Placement& placement) {
  for (const auto& ms : scenario.app.microservices) {
    const auto options =
        feasible_strategies(ms, scenario.devices, scenario.registries);
    const std::pair<std::string, std::string> chosen{
        placed_registry(placement, ms.id), placed_device(placement, ms.id)};
    if (std::find(options.begin(), options.end(), chosen) == options.end()) {
      throw Error(ErrorCode::NoFeasibleStrategy,
                  "placement assigns \"" + ms.id + "\" to infeasible (" +
                      chosen.first + ", " + chosen.second + ")");
    }
  }
  if (!joint_storage_ok(scenario, placement)) {
    throw Error(ErrorCode::NoFeasibleStrategy,
                "placement exceeds a device's storage capacity");
  }
}

}  // namespace edgeplace
