#pragma once

#include <string>
#include <utility>
#include <vector>

#include "edgeplace/types.hpp"

namespace edgeplace {

// Semantic validation of a scenario. Throws Error on the first violation
// found (check order: devices, registries, microservices, dataflows,
// acyclicity, link-table coverage); returns the scenario unchanged otherwise,
// so validate(validate(s)) == validate(s).
Scenario validate(const Scenario& scenario);

// Deterministic topological order of the application graph: nodes are emitted
// frontier by frontier (all currently dependency-free nodes, ascending id),
// so parallel stages stay adjacent. Throws Error(CycleDetected).
std::vector<std::string> topo_order(const Application& app);

// Synchronization barriers: microservices with two or more incoming dataflows,
// ascending id.
std::vector<std::string> barriers(const Application& app);

// All (registry id, device id) pairs that can host the microservice: the
// device must cover cores, memory, and image + workspace storage; every
// registry is paired with every admissible device. Sorted by (registry,
// device) id. Throws Error(NoFeasibleStrategy) when empty.
std::vector<std::pair<std::string, std::string>> feasible_strategies(
    const Microservice& ms, const std::vector<Device>& devices,
    const std::vector<Registry>& registries);

}  // namespace edgeplace
