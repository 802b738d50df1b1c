#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgeplace/cost.hpp"
#include "edgeplace/game.hpp"
#include "edgeplace/types.hpp"

namespace edgeplace {

enum class Policy { HubOnly, RegionalOnly, Hybrid, Oracle };

const char* to_string(Policy policy);
Policy policy_from_string(const std::string& text);

// Integer percentages by largest remainder: floor everyone, then hand the
// missing points to the largest remainders (ties: earliest entry). Sums to
// exactly 100 whenever total > 0.
std::vector<int> largest_remainder_percents(const std::vector<long long>& counts,
                                            long long total);

// Placement mix as (registry, device) -> percent, cells with zero count
// omitted.
std::map<std::pair<std::string, std::string>, int> distribution(
    const Placement& placement);

struct PolicyReport {
  Policy policy = Policy::Oracle;
  std::string scenario_name;
  CacheMode cache_mode = CacheMode::Cold;
  Placement placement;
  double total_energy_j = 0.0;
  double makespan_serial_s = 0.0;
  std::vector<CostBreakdown> breakdown;  // topological order
  std::map<std::pair<std::string, std::string>, int> dist;
  // hybrid only:
  std::optional<EquilibriumReport> equilibrium;
};

// Exclusive policies fix the registry ("hub"/"regional" ids when present,
// else the first/last registry by id) and brute-force the schedule; hybrid
// runs best-response dynamics over the full space; oracle brute-forces the
// full space.
std::string hub_registry(const Scenario& scenario);
std::string regional_registry(const Scenario& scenario);

PolicyReport run_policy(const Scenario& scenario, Policy policy,
                        CacheMode mode, int max_iters = 100,
                        std::uint64_t limit = 1000000);

struct Savings {
  Policy baseline = Policy::HubOnly;
  double baseline_j = 0.0;
  double hybrid_j = 0.0;
  double savings_joules = 0.0;   // baseline - hybrid
  double savings_percent = 0.0;  // savings_joules / baseline * 100
};

// Savings of the hybrid report against every other report present. Requires a
// hybrid report and at least one baseline.
std::vector<Savings> compare(const std::vector<PolicyReport>& reports);

enum class EmitFormat { Csv, Json };

// The JSON document emit() writes (stable key order via sorted object keys).
nlohmann::json report_to_json(const PolicyReport& report);

// Byte-deterministic serialization of a report. JSON round-trips through a
// parser; CSV carries one row per microservice plus total/makespan/
// distribution footer rows.
void emit(const PolicyReport& report, EmitFormat format, std::ostream& out);
void emit(const PolicyReport& report, EmitFormat format,
          const std::string& path);  // Error(IoError) on failure

// Shortest round-trip decimal text for a double (same encoder as the JSON
// emitter), used everywhere numbers are printed.
std::string format_double(double value);

}  // namespace edgeplace
