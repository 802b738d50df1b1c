#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgeplace/types.hpp"

namespace edgeplace {

// A complete assignment: for every microservice id, the registry its image is
// pulled from and the device it runs on.
struct Placement {
  std::map<std::string, std::string> sched;   // microservice -> device
  std::map<std::string, std::string> regist;  // microservice -> registry

  bool operator==(const Placement&) const = default;
};

// Which images are already sitting on which device. Warm mode answers
// "present" for everything; cold mode starts empty and records deployments as
// evaluation proceeds.
struct CacheState {
  explicit CacheState(CacheMode mode) : mode(mode) {}

  bool contains(const std::string& device, const std::string& ms) const {
    return mode == CacheMode::Warm || present.count({device, ms}) > 0;
  }
  void record(const std::string& device, const std::string& ms) {
    present.insert({device, ms});
  }

  CacheMode mode;
  std::set<std::pair<std::string, std::string>> present;
};

struct CostBreakdown {
  std::string microservice;
  std::string registry;
  std::string device;
  double t_deploy_s = 0.0;
  double t_transfer_s = 0.0;
  double t_process_s = 0.0;
  double ct_s = 0.0;        // t_deploy + t_transfer + t_process
  double e_active_j = 0.0;  // active_power * ct
  double e_static_j = 0.0;  // static_power * ct
  double ec_j = 0.0;        // e_active + e_static

  bool operator==(const CostBreakdown&) const = default;
};

// image pull time: size / registry bandwidth, or 0 when the image is already
// on the device. Cold evaluation records the image as present afterwards.
double deployment_time(const Microservice& ms, const std::string& registry,
                       const std::string& device, const LinkTable& links,
                       CacheState& cache);

// payload time for one dataflow: size / device bandwidth, 0 when co-located.
double transfer_time(const Dataflow& df, const std::string& up_device,
                     const std::string& down_device, const LinkTable& links);

// cpu_load / device speed.
double processing_time(const Microservice& ms, const Device& device);

// Full per-microservice breakdown under a placement. Transfer time sums every
// incoming dataflow (a barrier receives its inputs serially); the receiver
// carries the cost of its inbound payloads.
CostBreakdown completion_time(const std::string& ms_id,
                              const Scenario& scenario,
                              const Placement& placement, CacheState& cache);

// completion_time plus the energy fields filled in.
CostBreakdown energy(const std::string& ms_id, const Scenario& scenario,
                     const Placement& placement, CacheState& cache);

struct EnergyReport {
  double total_j = 0.0;
  std::vector<CostBreakdown> breakdown;  // in topological order
};

// Sum of every microservice's consumed energy, evaluated in topological order
// with a fresh cache of the given mode.
EnergyReport total_energy(const Scenario& scenario, const Placement& placement,
                          CacheMode mode);

enum class MakespanMode { Serial, CriticalPath };

// Serial: sum of completion times (devices execute non-concurrently).
// CriticalPath: longest root-to-leaf path weighting each node by its ct.
double makespan(const Scenario& scenario, const Placement& placement,
                CacheMode mode, MakespanMode style);

// True when every device's storage covers the images plus workspaces of all
// microservices placed on it.
bool joint_storage_ok(const Scenario& scenario, const Placement& placement);

// Throws unless the placement maps every microservice to a feasible
// (registry, device) pair and joint storage holds.
void validate_placement(const Scenario& scenario, const Placement& placement);

}  // namespace edgeplace
