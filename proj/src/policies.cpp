#include "edgeplace/policies.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

using nlohmann::json;

std::vector<std::string> sorted_registry_ids(const Scenario& scenario) {
  std::vector<std::string> ids;
  for (const auto& r : scenario.registries) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Shared by the exclusive policies: keep only one registry's strategies, then
// take the cooperative optimum of the restricted space.
StrategySpace restrict_to_registry(StrategySpace space,
                                   const std::string& registry) {
  for (size_t p = 0; p < space.players.size(); ++p) {
    auto& options = space.strategies[p];
    options.erase(std::remove_if(options.begin(), options.end(),
                                 [&](const Strategy& s) {
                                   return s.registry != registry;
                                 }),
                  options.end());
    if (options.empty()) {
      throw Error(ErrorCode::NoFeasibleStrategy,
                  "player \"" + space.players[p] +
                      "\" has no feasible device under registry \"" + registry +
                      "\"");
    }
  }
  return space;
}

}  // namespace

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::HubOnly:
      return "hub-only";
    case Policy::RegionalOnly:
      return "regional-only";
    case Policy::Hybrid:
      return "hybrid";
    case Policy::Oracle:
      return "oracle";
  }
  return "?";
}

Policy policy_from_string(const std::string& text) {
  if (text == "hub-only" || text == "hub_only") return Policy::HubOnly;
  if (text == "regional-only" || text == "regional_only")
    return Policy::RegionalOnly;
  if (text == "hybrid") return Policy::Hybrid;
  if (text == "oracle") return Policy::Oracle;
  throw Error(ErrorCode::InvalidValue, "unknown policy \"" + text + "\"");
}

std::vector<int> largest_remainder_percents(const std::vector<long long>& counts,
                                            long long total) {
  if (total <= 0) {
    throw Error(ErrorCode::InvalidValue,
                "largest_remainder_percents: total must be > 0");
  }
  std::vector<int> percents(counts.size(), 0);
  std::vector<long long> remainders(counts.size(), 0);
  long long assigned = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) {
      throw Error(ErrorCode::InvalidValue,
                  "largest_remainder_percents: negative count");
    }
    percents[i] = static_cast<int>(100 * counts[i] / total);
    remainders[i] = (100 * counts[i]) % total;
    assigned += percents[i];
  }
  long long leftover = 100 - assigned;
  // Hand the missing points to the largest remainders, earliest entry first on
  // ties.
  while (leftover > 0) {
    size_t pick = 0;
    for (size_t i = 1; i < remainders.size(); ++i) {
      if (remainders[i] > remainders[pick]) pick = i;
    }
    percents[pick] += 1;
    remainders[pick] = -1;
    --leftover;
  }
  return percents;
}

std::map<std::pair<std::string, std::string>, int> distribution(
    const Placement& placement) {
  std::map<std::pair<std::string, std::string>, long long> counts;
  for (const auto& [ms, device] : placement.sched) {
    counts[{placement.regist.at(ms), device}] += 1;
  }
  std::vector<long long> flat;
  for (const auto& [key, count] : counts) flat.push_back(count);

  std::map<std::pair<std::string, std::string>, int> out;
  if (flat.empty()) return out;
  const auto percents = largest_remainder_percents(
      flat, static_cast<long long>(placement.sched.size()));
  size_t i = 0;
  for (const auto& [key, count] : counts) out[key] = percents[i++];
  return out;
}

std::string hub_registry(const Scenario& scenario) {
  if (scenario.registries.empty()) {
    throw Error(ErrorCode::InvalidValue, "scenario has no registries");
  }
  for (const auto& r : scenario.registries) {
    if (r.id == "hub") return r.id;
  }
  return sorted_registry_ids(scenario).front();
}

std::string regional_registry(const Scenario& scenario) {
  if (scenario.registries.empty()) {
    throw Error(ErrorCode::InvalidValue, "scenario has no registries");
  }
  for (const auto& r : scenario.registries) {
    if (r.id == "regional") return r.id;
  }
  return sorted_registry_ids(scenario).back();
}

PolicyReport run_policy(const Scenario& scenario, Policy policy, CacheMode mode,
                        int max_iters, std::uint64_t limit) {
  const StrategySpace full = build_game(scenario);

  PolicyReport report;
  report.policy = policy;
  report.scenario_name = scenario.name;
  report.cache_mode = mode;

  switch (policy) {
    case Policy::HubOnly: {
      const auto space = restrict_to_registry(full, hub_registry(scenario));
      const auto oracle = brute_force(space, mode, limit);
      report.placement = space.to_placement(oracle.best);
      break;
    }
    case Policy::RegionalOnly: {
      const auto space = restrict_to_registry(full, regional_registry(scenario));
      const auto oracle = brute_force(space, mode, limit);
      report.placement = space.to_placement(oracle.best);
      break;
    }
    case Policy::Hybrid: {
      auto equilibrium = best_response_dynamics(full, mode, max_iters);
      report.placement = full.to_placement(equilibrium.profile);
      report.equilibrium = std::move(equilibrium);
      break;
    }
    case Policy::Oracle: {
      const auto oracle = brute_force(full, mode, limit);
      report.placement = full.to_placement(oracle.best);
      break;
    }
  }

  const EnergyReport energy = total_energy(scenario, report.placement, mode);
  report.total_energy_j = energy.total_j;
  report.breakdown = energy.breakdown;
  report.makespan_serial_s =
      makespan(scenario, report.placement, mode, MakespanMode::Serial);
  report.dist = distribution(report.placement);
  return report;
}

std::vector<Savings> compare(const std::vector<PolicyReport>& reports) {
  const PolicyReport* hybrid = nullptr;
  for (const auto& r : reports) {
    if (r.policy == Policy::Hybrid) hybrid = &r;
  }
  if (!hybrid) {
    throw Error(ErrorCode::InvalidValue, "compare: no hybrid report present");
  }
  std::vector<Savings> out;
  for (const auto& r : reports) {
    if (r.policy == Policy::Hybrid) continue;
    Savings s;
    s.baseline = r.policy;
    s.baseline_j = r.total_energy_j;
    s.hybrid_j = hybrid->total_energy_j;
    s.savings_joules = s.baseline_j - s.hybrid_j;
    s.savings_percent =
        s.baseline_j == 0.0 ? 0.0 : s.savings_joules / s.baseline_j * 100.0;
    out.push_back(s);
  }
  if (out.empty()) {
    throw Error(ErrorCode::InvalidValue, "compare: no baseline reports present");
  }
  return out;
}

std::string format_double(double value) { return json(value).dump(); }

nlohmann::json report_to_json(const PolicyReport& report) {
  json j;
  j["policy"] = to_string(report.policy);
  j["scenario"] = report.scenario_name;
  j["cache_mode"] = to_string(report.cache_mode);
  j["total_energy_j"] = report.total_energy_j;
  j["makespan_serial_s"] = report.makespan_serial_s;

  json placement;
  for (const auto& [ms, device] : report.placement.sched) {
    placement[ms] =
        json{{"registry", report.placement.regist.at(ms)}, {"device", device}};
  }
  j["placement"] = std::move(placement);

  json breakdown = json::array();
  for (const auto& b : report.breakdown) {
    json row;
    row["microservice"] = b.microservice;
    row["registry"] = b.registry;
    row["device"] = b.device;
    row["t_deploy_s"] = b.t_deploy_s;
    row["t_transfer_s"] = b.t_transfer_s;
    row["t_process_s"] = b.t_process_s;
    row["ct_s"] = b.ct_s;
    row["e_active_j"] = b.e_active_j;
    row["e_static_j"] = b.e_static_j;
    row["ec_j"] = b.ec_j;
    breakdown.push_back(std::move(row));
  }
  j["breakdown"] = std::move(breakdown);

  json dist = json::array();
  for (const auto& [key, percent] : report.dist) {
    dist.push_back(json{{"registry", key.first},
                        {"device", key.second},
                        {"percent", percent}});
  }
  j["distribution"] = std::move(dist);

  if (report.equilibrium) {
    json eq;
    eq["converged"] = report.equilibrium->converged;
    eq["is_pure_nash"] = report.equilibrium->is_pure_nash;
    eq["iterations"] = report.equilibrium->iterations;
    j["equilibrium"] = std::move(eq);
  }
  return j;
}

namespace {

void emit_csv(const PolicyReport& report, std::ostream& out) {
  const char* policy = to_string(report.policy);
  out << "policy,microservice,registry,device,t_deploy_s,t_transfer_s,"
         "t_process_s,ct_s,e_active_j,e_static_j,ec_j\n";
  for (const auto& b : report.breakdown) {
    out << policy << ',' << b.microservice << ',' << b.registry << ','
        << b.device << ',' << format_double(b.t_deploy_s) << ','
        << format_double(b.t_transfer_s) << ',' << format_double(b.t_process_s)
        << ',' << format_double(b.ct_s) << ',' << format_double(b.e_active_j)
        << ',' << format_double(b.e_static_j) << ',' << format_double(b.ec_j)
        << '\n';
  }
  out << policy << ",total_energy_j,,,,,,,,,"
      << format_double(report.total_energy_j) << '\n';
  out << policy << ",makespan_serial_s,,,,,,,,,"
      << format_double(report.makespan_serial_s) << '\n';
  for (const auto& [key, percent] : report.dist) {
    out << policy << ",distribution," << key.first << ',' << key.second
        << ",,,,,,," << percent << '\n';
  }
}

}  // namespace

void emit(const PolicyReport& report, EmitFormat format, std::ostream& out) {
  if (format == EmitFormat::Csv) {
    emit_csv(report, out);
  } else {
    out << report_to_json(report).dump(2) << "\n";
  }
}

void emit(const PolicyReport& report, EmitFormat format,
          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open \"" + path + "\" for writing");
  }
  emit(report, format, out);
  if (!out) {
    throw Error(ErrorCode::IoError, "failed while writing \"" + path + "\"");
  }
}

}  // namespace edgeplace
