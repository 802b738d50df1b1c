#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgeplace/builtin.hpp"
#include "edgeplace/cost.hpp"
#include "edgeplace/error.hpp"
#include "edgeplace/game.hpp"
#include "edgeplace/policies.hpp"
#include "edgeplace/random_scenario.hpp"
#include "edgeplace/scenario_io.hpp"
#include "edgeplace/validate.hpp"

namespace {

using namespace edgeplace;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::SpaceTooLarge:
      return 4;
    case ErrorCode::NonConvergence:
      return 5;
    default:
      return 2;  // every validation/semantic failure
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open \"" + path + "\" for writing");
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::IoError, "failed while writing \"" + path + "\"");
  }
}

// The --cache flag overrides the scenario's own default only when given.
CacheMode resolve_cache(const Scenario& scenario, const CLI::App* cmd,
                        const std::string& flag_value) {
  if (cmd->count("--cache") > 0) return cache_mode_from_string(flag_value);
  return scenario.cache_mode;
}

std::string render_report(const PolicyReport& report, EmitFormat format) {
  std::ostringstream out;
  emit(report, format, out);
  return out.str();
}

json savings_to_json(const Savings& s) {
  json j;
  j["baseline"] = to_string(s.baseline);
  j["baseline_j"] = s.baseline_j;
  j["hybrid_j"] = s.hybrid_j;
  j["savings_joules"] = s.savings_joules;
  j["savings_percent"] = s.savings_percent;
  return j;
}

void render_savings_csv(const std::vector<Savings>& savings,
                        std::ostringstream& out) {
  out << "baseline,baseline_j,hybrid_j,savings_joules,savings_percent\n";
  for (const auto& s : savings) {
    out << to_string(s.baseline) << ',' << format_double(s.baseline_j) << ','
        << format_double(s.hybrid_j) << ',' << format_double(s.savings_joules)
        << ',' << format_double(s.savings_percent) << '\n';
  }
}

json placement_to_json(const Placement& placement) {
  json j;
  for (const auto& [ms, device] : placement.sched) {
    j[ms] = json{{"registry", placement.regist.at(ms)}, {"device", device}};
  }
  return j;
}

constexpr Policy kAllPolicies[] = {Policy::HubOnly, Policy::RegionalOnly,
                                   Policy::Hybrid, Policy::Oracle};

int cmd_validate(const std::string& path) {
  const Scenario scenario = load_scenario(path);
  std::cout << "ok: " << scenario.name << " ("
            << scenario.app.microservices.size() << " microservices, "
            << scenario.devices.size() << " devices, "
            << scenario.registries.size() << " registries)\n";
  return 0;
}

void require_nash_or_throw(const PolicyReport& report) {
  if (!report.equilibrium) return;
  if (report.equilibrium->converged && report.equilibrium->is_pure_nash) return;
  throw Error(ErrorCode::NonConvergence,
              "best-response dynamics did not reach a pure Nash equilibrium "
              "within the sweep limit");
}

int cmd_solve(const Scenario& scenario, const std::string& policy_text,
              CacheMode mode, int max_iters, std::uint64_t limit,
              EmitFormat format, const std::string& out_path,
              bool require_nash) {
  if (policy_text != "all") {
    const PolicyReport report =
        run_policy(scenario, policy_from_string(policy_text), mode, max_iters,
                   limit);
    if (require_nash) require_nash_or_throw(report);
    write_output(render_report(report, format), out_path);
    return 0;
  }

  std::vector<PolicyReport> reports;
  for (Policy policy : kAllPolicies) {
    reports.push_back(run_policy(scenario, policy, mode, max_iters, limit));
  }
  const std::vector<Savings> savings = compare(reports);
  if (require_nash) {
    for (const auto& report : reports) require_nash_or_throw(report);
  }

  std::string text;
  if (format == EmitFormat::Json) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["cache_mode"] = to_string(mode);
    json report_array = json::array();
    for (const auto& report : reports) {
      report_array.push_back(report_to_json(report));
    }
    doc["reports"] = std::move(report_array);
    json savings_array = json::array();
    for (const auto& s : savings) savings_array.push_back(savings_to_json(s));
    doc["savings"] = std::move(savings_array);
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    for (const auto& report : reports) {
      out << render_report(report, EmitFormat::Csv) << "\n";
    }
    render_savings_csv(savings, out);
    text = out.str();
  }
  write_output(text, out_path);
  return 0;
}

int cmd_oracle(const Scenario& scenario, CacheMode mode, int max_iters,
               std::uint64_t limit, EmitFormat format,
               const std::string& out_path) {
  const StrategySpace space = build_game(scenario);
  const OracleResult result = brute_force(space, mode, limit);
  const EquilibriumReport dynamics =
      best_response_dynamics(space, mode, max_iters);

  const double optimum_j =
      total_energy(scenario, space.to_placement(result.best), mode).total_j;
  const double dynamics_j =
      total_energy(scenario, space.to_placement(dynamics.profile), mode).total_j;
  const bool in_nash_set =
      std::find(result.nash_profiles.begin(), result.nash_profiles.end(),
                dynamics.profile) != result.nash_profiles.end();
  const bool matches_optimum = dynamics.profile == result.best;

  std::string text;
  if (format == EmitFormat::Json) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["cache_mode"] = to_string(mode);
    doc["space_size"] = result.space_size;
    doc["optimum"] = json{{"placement", placement_to_json(
                                            space.to_placement(result.best))},
                          {"total_energy_j", optimum_j}};
    doc["nash_count"] = result.nash_profiles.size();
    doc["dynamics"] = json{{"converged", dynamics.converged},
                           {"is_pure_nash", dynamics.is_pure_nash},
                           {"iterations", dynamics.iterations},
                           {"total_energy_j", dynamics_j},
                           {"in_nash_set", in_nash_set},
                           {"matches_optimum", matches_optimum}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "metric,value\n";
    out << "scenario," << scenario.name << '\n';
    out << "cache_mode," << to_string(mode) << '\n';
    out << "space_size," << result.space_size << '\n';
    out << "optimum_total_energy_j," << format_double(optimum_j) << '\n';
    out << "nash_count," << result.nash_profiles.size() << '\n';
    out << "dynamics_total_energy_j," << format_double(dynamics_j) << '\n';
    out << "dynamics_converged," << (dynamics.converged ? "true" : "false")
        << '\n';
    out << "dynamics_is_pure_nash," << (dynamics.is_pure_nash ? "true" : "false")
        << '\n';
    out << "dynamics_iterations," << dynamics.iterations << '\n';
    out << "dynamics_in_nash_set," << (in_nash_set ? "true" : "false") << '\n';
    out << "dynamics_matches_optimum," << (matches_optimum ? "true" : "false")
        << '\n';
    text = out.str();
  }
  write_output(text, out_path);
  return 0;
}

int cmd_paper_repro(int max_iters, std::uint64_t limit,
                    const std::string& out_path) {
  std::ostringstream out;
  std::vector<std::string> failures;

  const auto check = [&](bool ok, const std::string& what) {
    if (ok) {
      out << "ok: " << what << '\n';
    } else {
      out << "FAILED: " << what << '\n';
      failures.push_back(what);
    }
  };

  for (const Scenario& scenario : bundled_scenarios()) {
    const CacheMode mode = scenario.cache_mode;
    std::vector<PolicyReport> reports;
    for (Policy policy : kAllPolicies) {
      reports.push_back(run_policy(scenario, policy, mode, max_iters, limit));
    }
    const std::vector<Savings> savings = compare(reports);

    out << "scenario: " << scenario.name << '\n';
    out << "distribution (% of image deployments):\n";
    out << "policy,registry,device,percent\n";
    for (const auto& report : reports) {
      for (const auto& [key, percent] : report.dist) {
        out << to_string(report.policy) << ',' << key.first << ','
            << key.second << ',' << percent << '\n';
      }
    }
    out << "\nenergy (J):\npolicy,total_energy_j\n";
    for (const auto& report : reports) {
      out << to_string(report.policy) << ','
          << format_double(report.total_energy_j) << '\n';
    }
    out << "\nsavings vs hybrid:\n";
    render_savings_csv(savings, out);

    out << "\nchecks:\n";
    const PolicyReport& hub = reports[0];
    const PolicyReport& regional = reports[1];
    const PolicyReport& hybrid = reports[2];
    const PolicyReport& oracle = reports[3];
    check(oracle.total_energy_j <= hub.total_energy_j,
          scenario.name + ": oracle energy <= hub-only energy");
    check(oracle.total_energy_j <= regional.total_energy_j,
          scenario.name + ": oracle energy <= regional-only energy");
    check(hybrid.equilibrium && hybrid.equilibrium->converged &&
              hybrid.equilibrium->is_pure_nash,
          scenario.name + ": hybrid converged to a pure Nash equilibrium");
    for (const auto& report : reports) {
      int sum = 0;
      for (const auto& [key, percent] : report.dist) sum += percent;
      check(sum == 100, scenario.name + ": " + to_string(report.policy) +
                            " distribution sums to 100");
    }
    out << '\n';
  }

  if (failures.empty()) {
    out << "all checks passed\n";
  } else {
    out << "failed checks: " << failures.size() << '\n';
  }
  write_output(out.str(), out_path);
  return failures.empty() ? 0 : 1;
}

int cmd_gen(std::uint64_t seed, const std::string& out_path) {
  const Scenario scenario = random_scenario(seed);
  write_output(scenario_to_json(scenario).dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "edgeplace: energy-aware microservice placement over edge devices and "
      "container registries"};
  app.require_subcommand(1);

  const std::vector<std::string> cache_values = {"cold", "warm"};
  const std::vector<std::string> format_values = {"csv", "json"};
  const std::vector<std::string> policy_values = {
      "hub-only", "regional-only", "hybrid", "oracle", "all"};

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a scenario document");
  std::string validate_path;
  validate_cmd->add_option("--scenario", validate_path, "scenario JSON path")
      ->required();

  auto* solve_cmd =
      app.add_subcommand("solve", "Run a placement policy and emit its report");
  std::string solve_path, solve_policy, solve_cache = "cold",
                           solve_format = "json", solve_out;
  int solve_max_iters = 100;
  std::uint64_t solve_limit = 1000000;
  bool solve_require_nash = false;
  bool solve_all = false;
  solve_cmd->add_option("--scenario", solve_path, "scenario JSON path")
      ->required();
  auto* solve_policy_opt =
      solve_cmd->add_option("--policy", solve_policy, "placement policy")
          ->check(CLI::IsMember(policy_values));
  solve_cmd->add_flag("--all", solve_all, "shorthand for --policy all")
      ->excludes(solve_policy_opt);
  solve_cmd->add_option("--cache", solve_cache, "image cache mode")
      ->check(CLI::IsMember(cache_values));
  solve_cmd->add_option("--max-iters", solve_max_iters,
                        "best-response sweep limit");
  solve_cmd->add_option("--limit", solve_limit, "joint-space enumeration cap");
  solve_cmd->add_option("--format", solve_format, "report format")
      ->check(CLI::IsMember(format_values));
  solve_cmd->add_option("--out", solve_out, "write the report here");
  solve_cmd->add_flag("--require-nash", solve_require_nash,
                      "exit 5 unless dynamics reached a pure Nash equilibrium");

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Exhaustive optimum and Nash set, compared with dynamics");
  std::string oracle_path, oracle_cache = "cold", oracle_format = "json",
                           oracle_out;
  int oracle_max_iters = 100;
  std::uint64_t oracle_limit = 1000000;
  oracle_cmd->add_option("--scenario", oracle_path, "scenario JSON path")
      ->required();
  oracle_cmd->add_option("--cache", oracle_cache, "image cache mode")
      ->check(CLI::IsMember(cache_values));
  oracle_cmd->add_option("--max-iters", oracle_max_iters,
                         "best-response sweep limit");
  oracle_cmd->add_option("--limit", oracle_limit,
                         "joint-space enumeration cap");
  oracle_cmd->add_option("--format", oracle_format, "report format")
      ->check(CLI::IsMember(format_values));
  oracle_cmd->add_option("--out", oracle_out, "write the report here");

  auto* repro_cmd = app.add_subcommand(
      "paper-repro",
      "Solve both bundled scenarios with every policy and check the headline "
      "inequalities");
  std::string repro_out;
  int repro_max_iters = 100;
  std::uint64_t repro_limit = 1000000;
  repro_cmd->add_option("--max-iters", repro_max_iters,
                        "best-response sweep limit");
  repro_cmd->add_option("--limit", repro_limit, "joint-space enumeration cap");
  repro_cmd->add_option("--out", repro_out, "write the tables here");

  auto* gen_cmd = app.add_subcommand(
      "gen", "Generate a seeded random scenario for property testing");
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("--seed", gen_seed, "generator seed")->required();
  gen_cmd->add_option("--out", gen_out, "write the scenario here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_path);
    if (solve_cmd->parsed()) {
      if (solve_all) solve_policy = "all";
      if (solve_policy.empty()) {
        throw Error(ErrorCode::InvalidValue,
                    "solve requires --policy or --all");
      }
      const Scenario scenario = load_scenario(solve_path);
      const CacheMode mode = resolve_cache(scenario, solve_cmd, solve_cache);
      return cmd_solve(scenario, solve_policy, mode, solve_max_iters,
                       solve_limit,
                       solve_format == "csv" ? EmitFormat::Csv
                                             : EmitFormat::Json,
                       solve_out, solve_require_nash);
    }
    if (oracle_cmd->parsed()) {
      const Scenario scenario = load_scenario(oracle_path);
      const CacheMode mode = resolve_cache(scenario, oracle_cmd, oracle_cache);
      return cmd_oracle(scenario, mode, oracle_max_iters, oracle_limit,
                        oracle_format == "csv" ? EmitFormat::Csv
                                               : EmitFormat::Json,
                        oracle_out);
    }
    if (repro_cmd->parsed()) {
      return cmd_paper_repro(repro_max_iters, repro_limit, repro_out);
    }
    if (gen_cmd->parsed()) return cmd_gen(gen_seed, gen_out);
  } catch (const Error& e) {
    std::cerr << "error: [" << to_string(e.code()) << "] " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
