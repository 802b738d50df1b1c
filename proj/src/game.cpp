#include "edgeplace/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// cand is a strict improvement over cur once it clears the relative epsilon
// band (resolving the +inf cases exactly).
bool improves(double cur, double cand, double eps_rel) {
  if (std::isinf(cur)) return !std::isinf(cand);
  return cand < cur - eps_rel * std::abs(cur);
}

// Precomputed evaluation tables. Every entry is produced by the same cost.cpp
// primitives, accumulated in the same order as energy()/total_energy(), so
// table-backed results are bit-identical to the definitional path.
class Evaluator {
 public:
  Evaluator(const StrategySpace& space, CacheMode mode)
      : space_(space), n_(static_cast<int>(space.players.size())) {
    const Scenario& sc = space.scenario;
    std::map<std::string, int> player_of;
    for (int p = 0; p < n_; ++p) player_of[space.players[p]] = p;
    std::map<std::string, int> device_of;
    for (std::size_t d = 0; d < sc.devices.size(); ++d)
      device_of[sc.devices[d].id] = static_cast<int>(d);

    device_idx_.resize(n_);
    t_deploy_.resize(n_);
    t_process_.resize(n_);
    storage_gb_.resize(n_);
    in_edges_.resize(n_);
    for (int p = 0; p < n_; ++p) {
      const Microservice& ms = *sc.app.find(space.players[p]);
      storage_gb_[p] = ms.image_size_gb + ms.req.stor_gb;
      const auto& options = space.strategies[p];
      device_idx_[p].resize(options.size());
      t_deploy_[p].resize(options.size());
      t_process_[p].resize(options.size());
      for (std::size_t s = 0; s < options.size(); ++s) {
        const Device& dev = sc.devices[device_of.at(options[s].device)];
        device_idx_[p][s] = device_of.at(options[s].device);
        CacheState cache(mode);
        t_deploy_[p][s] = deployment_time(ms, options[s].registry,
                                          options[s].device, sc.links, cache);
        t_process_[p][s] = processing_time(ms, dev);
      }
    }
    // Inbound edges per player, in dataflow-declaration order (the order
    // completion_time sums them in).
    for (const auto& df : sc.app.dataflows) {
      const int down = player_of.at(df.downstream);
      const int up = player_of.at(df.upstream);
      InEdge edge;
      edge.up_player = up;
      // transfer time by (own strategy, upstream strategy)
      edge.t_transfer.resize(space.strategies[down].size());
      for (std::size_t s = 0; s < space.strategies[down].size(); ++s) {
        edge.t_transfer[s].resize(space.strategies[up].size());
        for (std::size_t u = 0; u < space.strategies[up].size(); ++u) {
          edge.t_transfer[s][u] =
              transfer_time(df, space.strategies[up][u].device,
                            space.strategies[down][s].device, sc.links);
        }
      }
      in_edges_[down].push_back(std::move(edge));
    }
    // Storage accounting mirrors joint_storage_ok: microservices in
    // application order.
    for (const auto& ms : sc.app.microservices)
      app_order_.push_back(player_of.at(ms.id));
    device_caps_.resize(sc.devices.size());
    for (std::size_t d = 0; d < sc.devices.size(); ++d)
      device_caps_[d] = sc.devices[d].stor_gb;
    used_.resize(sc.devices.size());
  }

  bool storage_ok(const Profile& profile) const {
    std::fill(used_.begin(), used_.end(), 0.0);
    for (int p : app_order_) used_[device_idx_[p][profile[p]]] += storage_gb_[p];
    for (std::size_t d = 0; d < used_.size(); ++d) {
      if (used_[d] > device_caps_[d]) return false;
    }
    return true;
  }

  // Own energy assuming joint storage already holds.
  double cost_unchecked(const Profile& profile, int p) const {
    const int s = profile[p];
    double transfer = 0.0;
    for (const auto& edge : in_edges_[p])
      transfer += edge.t_transfer[s][profile[edge.up_player]];
    const double ct = t_deploy_[p][s] + transfer + t_process_[p][s];
    const Device& dev = space_.scenario.devices[device_idx_[p][s]];
    const double e_active = dev.active_power_w * ct;
    const double e_static = dev.static_power_w * ct;
    return e_active + e_static;
  }

  double cost(const Profile& profile, int p) const {
    if (!storage_ok(profile)) return kInf;
    return cost_unchecked(profile, p);
  }

  double total(const Profile& profile) const {
    if (!storage_ok(profile)) return kInf;
    double sum = 0.0;
    for (int p = 0; p < n_; ++p) sum += cost_unchecked(profile, p);
    return sum;
  }

  // Deployment + processing energy of one strategy, no transfers: the solo
  // objective seeding the dynamics.
  double solo_cost(int p, int s) const {
    const double ct = t_deploy_[p][s] + t_process_[p][s];
    const Device& dev = space_.scenario.devices[device_idx_[p][s]];
    return dev.active_power_w * ct + dev.static_power_w * ct;
  }

  int players() const { return n_; }
  int strategy_count(int p) const {
    return static_cast<int>(t_deploy_[p].size());
  }

 private:
  struct InEdge {
    int up_player = 0;
    std::vector<std::vector<double>> t_transfer;  // [own s][up s]
  };

  const StrategySpace& space_;
  int n_;
  std::vector<std::vector<int>> device_idx_;     // [p][s] -> device index
  std::vector<std::vector<double>> t_deploy_;    // [p][s]
  std::vector<std::vector<double>> t_process_;   // [p][s]
  std::vector<double> storage_gb_;               // image + workspace, per p
  std::vector<std::vector<InEdge>> in_edges_;    // [p], declaration order
  std::vector<int> app_order_;                   // players in app order
  std::vector<double> device_caps_;
  mutable std::vector<double> used_;
};

int best_response_impl(const Evaluator& eval, Profile& profile, int player) {
  double best_cost = kInf;
  int best = -1;
  const int original = profile[player];
  for (int s = 0; s < eval.strategy_count(player); ++s) {
    profile[player] = s;
    const double c = eval.cost(profile, player);
    if (std::isinf(c)) continue;  // storage-violating strategies are skipped
    if (best < 0 || c < best_cost) {
      best_cost = c;
      best = s;
    }
  }
  profile[player] = original;
  if (best < 0) {
    throw Error(ErrorCode::NoFeasibleStrategy,
                "every strategy of player " + std::to_string(player) +
                    " violates joint storage given the others");
  }
  return best;
}

}  // namespace

std::uint64_t StrategySpace::joint_size(std::uint64_t limit) const {
  std::uint64_t size = 1;
  for (const auto& options : strategies) {
    const std::uint64_t count = options.size();
    if (count == 0) return 0;
    if (size > (limit + 1) / count + 1) return limit + 1;  // saturate
    size *= count;
    if (size > limit) return limit + 1;
  }
  return size;
}

Placement StrategySpace::to_placement(const std::vector<int>& choice) const {
  Placement placement;
  for (std::size_t p = 0; p < players.size(); ++p) {
    const Strategy& s = strategies[p][choice[p]];
    placement.sched[players[p]] = s.device;
    placement.regist[players[p]] = s.registry;
  }
  return placement;
}

StrategySpace build_game(const Scenario& scenario) {
  StrategySpace space;
  space.scenario = validate(scenario);
  space.players = topo_order(space.scenario.app);
  for (const auto& id : space.players) {
    const Microservice& ms = *space.scenario.app.find(id);
    std::vector<Strategy> options;
    for (auto& [reg, dev] : feasible_strategies(ms, space.scenario.devices,
                                                space.scenario.registries)) {
      options.push_back({reg, dev});
    }
    space.strategies.push_back(std::move(options));
  }
  return space;
}

double player_cost(const StrategySpace& space, const Profile& profile,
                   int player, CacheMode mode) {
  // Definitional path: build the placement and price this player with the
  // cost-module primitives.
  const Placement placement = space.to_placement(profile);
  if (!joint_storage_ok(space.scenario, placement)) return kInf;
  CacheState cache(mode);
  return energy(space.players[player], space.scenario, placement, cache).ec_j;
}

int best_response(const StrategySpace& space, const Profile& profile,
                  int player, CacheMode mode) {
  Evaluator eval(space, mode);
  Profile work = profile;
  return best_response_impl(eval, work, player);
}

NashCheck verify_pure_nash(const StrategySpace& space, const Profile& profile,
                           CacheMode mode, double epsilon_rel) {
  Evaluator eval(space, mode);
  NashCheck check;
  Profile work = profile;
  for (int p = 0; p < eval.players(); ++p) {
    const double cur = eval.cost(work, p);
    for (int s = 0; s < eval.strategy_count(p); ++s) {
      if (s == profile[p]) continue;
      work[p] = s;
      const double cand = eval.cost(work, p);
      work[p] = profile[p];
      if (improves(cur, cand, epsilon_rel)) {
        check.is_nash = false;
        check.deviation = Deviation{p, profile[p], s, cur, cand};
        return check;
      }
    }
  }
  check.is_nash = true;
  return check;
}

EquilibriumReport best_response_dynamics(const StrategySpace& space,
                                         CacheMode mode, int max_iters) {
  if (max_iters < 1) {
    throw Error(ErrorCode::InvalidValue, "max_iters must be >= 1");
  }
  Evaluator eval(space, mode);
  const int n = eval.players();

  EquilibriumReport report;
  // Seed: every player's solo optimum (deployment + processing only).
  Profile profile(n, 0);
  for (int p = 0; p < n; ++p) {
    double best_cost = kInf;
    for (int s = 0; s < eval.strategy_count(p); ++s) {
      const double c = eval.solo_cost(p, s);
      if (c < best_cost) {
        best_cost = c;
        profile[p] = s;
      }
    }
  }
  report.trajectory.push_back(profile);

  Profile best_seen = profile;
  double best_total = eval.total(profile);

  for (int iter = 1; iter <= max_iters; ++iter) {
    bool changed = false;
    for (int p = 0; p < n; ++p) {
      int br;
      try {
        br = best_response_impl(eval, profile, p);
      } catch (const Error&) {
        continue;  // boxed in by the others' storage use; hold position
      }
      if (br != profile[p]) {
        profile[p] = br;
        changed = true;
        const double t = eval.total(profile);
        if (t < best_total) {
          best_total = t;
          best_seen = profile;
        }
      }
    }
    report.trajectory.push_back(profile);
    report.iterations = iter;
    if (!changed) {
      report.converged = true;
      break;
    }
  }

  if (report.converged) {
    report.profile = profile;
    report.total_energy_j = eval.total(profile);
    report.is_pure_nash = verify_pure_nash(space, profile, mode).is_nash;
  } else {
    report.profile = best_seen;
    report.total_energy_j = best_total;
    report.is_pure_nash = false;
  }
  return report;
}

OracleResult brute_force(const StrategySpace& space, CacheMode mode,
                         std::uint64_t limit) {
  OracleResult result;
  result.space_size = space.joint_size(limit);
  if (result.space_size > limit) {
    // Recompute without the tight cap so the diagnostic names the real size
    // whenever it fits a 64-bit count.
    const std::uint64_t wide_cap = std::numeric_limits<std::uint64_t>::max() - 1;
    const std::uint64_t size = space.joint_size(wide_cap);
    std::ostringstream msg;
    msg << "joint strategy space holds ";
    if (size > wide_cap) {
      msg << "more than " << wide_cap;
    } else {
      msg << size;
    }
    msg << " profiles, above the enumeration limit of " << limit;
    throw Error(ErrorCode::SpaceTooLarge, msg.str());
  }

  Evaluator eval(space, mode);
  const int n = eval.players();
  Profile profile(n, 0);
  double best_total = kInf;
  bool have_best = false;
  constexpr double kNashEps = 1e-9;

  while (true) {
    const double total = eval.total(profile);
    if (!have_best || total < best_total) {
      best_total = total;
      result.best = profile;
      have_best = true;
    }

    bool is_nash = true;
    for (int p = 0; p < n && is_nash; ++p) {
      const double cur = eval.cost(profile, p);
      const int original = profile[p];
      for (int s = 0; s < eval.strategy_count(p); ++s) {
        if (s == original) continue;
        profile[p] = s;
        const double cand = eval.cost(profile, p);
        if (improves(cur, cand, kNashEps)) {
          is_nash = false;
          break;
        }
      }
      profile[p] = original;
    }
    if (is_nash) result.nash_profiles.push_back(profile);

    // Lexicographic odometer, last player fastest.
    int p = n - 1;
    while (p >= 0 && profile[p] + 1 >= eval.strategy_count(p)) {
      profile[p] = 0;
      --p;
    }
    if (p < 0) break;
    ++profile[p];
  }

  result.best_energy_j = best_total;
  return result;
}

}  // namespace edgeplace
