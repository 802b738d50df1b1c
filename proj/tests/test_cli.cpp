#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "edgeplace/scenario_io.hpp"
#include "edgeplace/validate.hpp"

#ifdef _WIN32
#error "the CLI tests drive the binary through POSIX process status macros"
#endif
#include <sys/wait.h>

using namespace edgeplace;
using doctest::Approx;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs the installed binary (EDGEPLACE_BIN) with the given arguments,
// capturing both streams and the real exit code.
CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("EDGEPLACE_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "EDGEPLACE_BIN must point at the binary");

  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_path = "cli_stdout_" + tag + ".txt";
  const std::string err_path = "cli_stderr_" + tag + ".txt";
  const std::string command = std::string("\"") + bin + "\" " + args + " > " +
                              out_path + " 2> " + err_path;

  const int status = std::system(command.c_str());
  CliResult result;
  if (status != -1 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("EDGEPLACE_DATA");
  REQUIRE_MESSAGE(dir != nullptr, "EDGEPLACE_DATA must point at the data dir");
  return std::string(dir) + "/" + name;
}

std::string text_scenario() { return data_path("text_processing.json"); }
std::string video_scenario() { return data_path("video_processing.json"); }

}  // namespace

TEST_CASE("validate accepts the bundled scenario files") {
  const CliResult text = run_cli("validate --scenario " + text_scenario());
  CHECK(text.exit_code == 0);
  CHECK(text.out.find("ok: text-processing") != std::string::npos);
  CHECK(text.out.find("6 microservices") != std::string::npos);
  CHECK(text.err.empty());

  const CliResult video = run_cli("validate --scenario " + video_scenario());
  CHECK(video.exit_code == 0);
  CHECK(video.out.find("ok: video-processing") != std::string::npos);
}

TEST_CASE("solve emits a parseable hybrid report") {
  const CliResult r = run_cli("solve --scenario " + text_scenario() +
                              " --policy hybrid");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("policy") == "hybrid");
  CHECK(doc.at("scenario") == "text-processing");
  CHECK(doc.at("cache_mode") == "cold");
  CHECK(doc.at("total_energy_j").get<double>() ==
        Approx(7312.713333333333).epsilon(1e-12));
  CHECK(doc.at("equilibrium").at("converged") == true);
  CHECK(doc.at("equilibrium").at("is_pure_nash") == true);
  CHECK(doc.at("equilibrium").at("iterations") == 3);
  CHECK(doc.at("placement").at("decompress").at("device") == "medium");
  CHECK(doc.at("placement").at("decompress").at("registry") == "hub");
}

TEST_CASE("solve --format csv starts with the pinned header") {
  const CliResult r = run_cli("solve --scenario " + text_scenario() +
                              " --policy oracle --format csv");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header ==
        "policy,microservice,registry,device,t_deploy_s,t_transfer_s,"
        "t_process_s,ct_s,e_active_j,e_static_j,ec_j");
  CHECK(r.out.find("oracle,total_energy_j,,,,,,,,,5899.044444444444") !=
        std::string::npos);
}

TEST_CASE("solve --policy all bundles four reports and the savings table") {
  const CliResult r = run_cli("solve --scenario " + text_scenario() +
                              " --policy all");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.at("reports").size() == 4);
  CHECK(doc.at("reports")[0].at("policy") == "hub-only");
  CHECK(doc.at("reports")[3].at("policy") == "oracle");
  REQUIRE(doc.at("savings").size() == 3);
  CHECK(doc.at("savings")[0].at("baseline") == "hub-only");

  SUBCASE("--all is an equivalent shorthand") {
    const CliResult alias = run_cli("solve --scenario " + text_scenario() +
                                    " --all");
    CHECK(alias.exit_code == 0);
    CHECK(alias.out == r.out);
    CHECK(run_cli("solve --scenario " + text_scenario() +
                  " --all --policy hybrid")
              .exit_code != 0);  // mutually exclusive
  }
}

TEST_CASE("solve --out writes the report to a file") {
  const std::string out_file = "cli_report_tmp.json";
  const CliResult r = run_cli("solve --scenario " + text_scenario() +
                              " --policy oracle --out " + out_file);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  const nlohmann::json doc = nlohmann::json::parse(slurp(out_file));
  CHECK(doc.at("total_energy_j").get<double>() ==
        Approx(5899.044444444444).epsilon(1e-12));
  std::remove(out_file.c_str());
}

TEST_CASE("oracle reports the space, the optimum and the Nash census") {
  const CliResult r = run_cli("oracle --scenario " + text_scenario());
  REQUIRE(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("space_size") == 4096);
  CHECK(doc.at("nash_count") == 5);
  CHECK(doc.at("optimum").at("total_energy_j").get<double>() ==
        Approx(5899.044444444444).epsilon(1e-12));
  CHECK(doc.at("dynamics").at("in_nash_set") == true);
  CHECK(doc.at("dynamics").at("matches_optimum") == false);
}

TEST_CASE("warm caches eliminate deployment energy") {
  const CliResult cold = run_cli("solve --scenario " + text_scenario() +
                                 " --policy oracle --cache cold");
  const CliResult warm = run_cli("solve --scenario " + text_scenario() +
                                 " --policy oracle --cache warm");
  REQUIRE(cold.exit_code == 0);
  REQUIRE(warm.exit_code == 0);
  const double cold_j = nlohmann::json::parse(cold.out)
                            .at("total_energy_j")
                            .get<double>();
  const double warm_j = nlohmann::json::parse(warm.out)
                            .at("total_energy_j")
                            .get<double>();
  CHECK(warm_j < cold_j);
}

TEST_CASE("a missing scenario file exits 3") {
  const CliResult r = run_cli("validate --scenario does_not_exist.json");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error: [io-error]") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("a malformed scenario exits 2") {
  const std::string path = "cli_bad_tmp.json";
  {
    std::ofstream out(path);
    out << "{\"name\": \"broken\"}\n";
  }
  const CliResult r = run_cli("validate --scenario " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error: [parse-error]") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("an oversized enumeration exits 4 and names the space size") {
  const CliResult r = run_cli("oracle --scenario " + text_scenario() +
                              " --limit 3");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("error: [space-too-large]") != std::string::npos);
  CHECK(r.err.find("4096") != std::string::npos);
}

TEST_CASE("--require-nash turns an unconverged sweep into exit 5") {
  const CliResult r = run_cli("solve --scenario " + text_scenario() +
                              " --policy hybrid --max-iters 1 --require-nash");
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("error: [non-convergence]") != std::string::npos);

  SUBCASE("without the flag the same run exits 0") {
    const CliResult ok = run_cli("solve --scenario " + text_scenario() +
                                 " --policy hybrid --max-iters 1");
    CHECK(ok.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(ok.out);
    CHECK(doc.at("equilibrium").at("converged") == false);
  }
}

TEST_CASE("gen is deterministic and emits a valid scenario") {
  const std::string path_a = "cli_gen_a_tmp.json";
  const std::string path_b = "cli_gen_b_tmp.json";
  const CliResult a = run_cli("gen --seed 7 --out " + path_a);
  const CliResult b = run_cli("gen --seed 7 --out " + path_b);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string body_a = slurp(path_a);
  CHECK(body_a == slurp(path_b));
  CHECK_FALSE(body_a.empty());

  const Scenario s = load_scenario(path_a);
  CHECK(s.name == "random-7");
  CHECK_NOTHROW(validate(s));

  const CliResult c = run_cli("gen --seed 8 --out " + path_b);
  REQUIRE(c.exit_code == 0);
  CHECK(slurp(path_b) != body_a);

  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("paper-repro runs both bundled studies green") {
  const CliResult r = run_cli("paper-repro");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("scenario: video-processing") != std::string::npos);
  CHECK(r.out.find("scenario: text-processing") != std::string::npos);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  CHECK(r.out.find("policy,registry,device,percent") != std::string::npos);
}

TEST_CASE("bad invocations fail without touching the solvers") {
  CHECK(run_cli("").exit_code != 0);             // a subcommand is required
  CHECK(run_cli("frobnicate").exit_code != 0);   // unknown subcommand
  CHECK(run_cli("solve --scenario " + text_scenario()).exit_code != 0);
  CHECK(run_cli("solve --scenario " + text_scenario() +
                " --policy sideways").exit_code != 0);
  CHECK(run_cli("gen").exit_code != 0);          // --seed is mandatory
}
