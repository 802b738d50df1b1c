#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeplace/cost.hpp"
#include "edgeplace/types.hpp"

namespace edgeplace {

// One pure strategy of a player: pull the image from `registry`, run on
// `device`.
struct Strategy {
  std::string registry;
  std::string device;

  bool operator==(const Strategy&) const = default;
};

// The placement game: one player per microservice (in topological order),
// strategies sorted by (registry, device). Holds its own scenario copy so
// evaluation needs no external state.
struct StrategySpace {
  Scenario scenario;
  std::vector<std::string> players;              // topological order
  std::vector<std::vector<Strategy>> strategies;  // per player

  // Product of strategy-list sizes, saturating at limit+1 to avoid overflow.
  std::uint64_t joint_size(std::uint64_t limit) const;

  Placement to_placement(const std::vector<int>& choice) const;
};

using Profile = std::vector<int>;  // one strategy index per player

StrategySpace build_game(const Scenario& scenario);

// The player's own consumed energy under the profile: deployment + processing
// plus every inbound transfer priced against the upstream players' devices
// (receiver pays). Profiles violating joint storage cost +infinity.
double player_cost(const StrategySpace& space, const Profile& profile,
                   int player, CacheMode mode);

// Index of the strategy minimizing the player's own cost, others fixed.
// Exact ties go to the lowest index, i.e. the lexicographically first
// (registry, device). Throws Error(NoFeasibleStrategy) when every strategy is
// storage-violating given the others.
int best_response(const StrategySpace& space, const Profile& profile,
                  int player, CacheMode mode);

struct Deviation {
  int player = 0;
  int from_strategy = 0;
  int to_strategy = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct NashCheck {
  bool is_nash = false;
  std::optional<Deviation> deviation;  // a profitable move, when one exists
};

// Pure-Nash test: no player can lower their own cost by more than
// epsilon_rel * current cost with a unilateral strategy change.
NashCheck verify_pure_nash(const StrategySpace& space, const Profile& profile,
                           CacheMode mode, double epsilon_rel = 1e-9);

struct EquilibriumReport {
  Profile profile;
  double total_energy_j = 0.0;
  bool converged = false;
  bool is_pure_nash = false;
  int iterations = 0;                  // sweeps executed
  std::vector<Profile> trajectory;     // profile after each sweep (incl. start)
};

// Round-robin best-response dynamics. Start: each player's solo argmin of
// deployment + processing energy (transfers and joint storage ignored).
// Sweep players in topological order; stop after a sweep with no change
// (converged) or after max_iters sweeps (returns the lowest-total profile
// seen, converged = false). Never throws for game reasons; a player with no
// finite strategy simply keeps their current choice. max_iters must be >= 1.
EquilibriumReport best_response_dynamics(const StrategySpace& space,
                                         CacheMode mode, int max_iters = 100);

struct OracleResult {
  Profile best;
  double best_energy_j = 0.0;
  std::vector<Profile> nash_profiles;  // every pure Nash, enumeration order
  std::uint64_t space_size = 0;
};

// Exhaustive enumeration of the joint space (lexicographic, player 0 slowest):
// global minimum of total energy plus the complete pure-Nash set. Throws
// Error(SpaceTooLarge) when the space exceeds `limit` profiles.
OracleResult brute_force(const StrategySpace& space, CacheMode mode,
                         std::uint64_t limit = 1000000);

}  // namespace edgeplace
