#pragma once

#include <cstdint>

#include "edgeplace/types.hpp"

namespace edgeplace {

// Seeded random scenario for property suites: hub + regional registries, two
// devices, 2..max_players microservices on a random DAG, all strategies
// feasible, storage generous enough that every profile is finite. Determinism
// does not depend on std::distribution implementations. players == 0 derives
// the count from the seed.
Scenario random_scenario(std::uint64_t seed, int players = 0,
                         int max_players = 6);

// Same scenario with every device's active and static power multiplied by
// lambda (for scale-invariance checks).
Scenario scale_powers(const Scenario& scenario, double lambda);

}  // namespace edgeplace
