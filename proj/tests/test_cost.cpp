#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "edgeplace/builtin.hpp"
#include "edgeplace/cost.hpp"
#include "edgeplace/error.hpp"
#include "edgeplace/random_scenario.hpp"
#include "edgeplace/types.hpp"
#include "edgeplace/validate.hpp"

using namespace edgeplace;
using doctest::Approx;

namespace {

constexpr double kTightRel = 1e-12;

Microservice make_ms(const std::string& id, double img, double load,
                     int cores = 1, double mem = 1.0, double stor = 1.0) {
  Microservice ms;
  ms.id = id;
  ms.image_size_gb = img;
  ms.req = {cores, load, mem, stor};
  return ms;
}

Device make_device(const std::string& id, double speed, double active,
                   double stat, double stor = 100.0) {
  return {id, 8, speed, 16.0, stor, active, stat};
}

// Reproduces the flagship worked example: microservice "b" on d1 pays a 70 s
// image pull (0.70 GB at 10 MB/s), a 2 s transfer (100 MB at 50 MB/s from
// "a" on d2) and 10 s of processing (10,000 MI at 1,000 MIPS), at 30 W active
// and 5 W static.
Scenario worked_example() {
  Scenario s;
  s.name = "worked-example";
  s.app.microservices = {make_ms("a", 0.5, 5000.0), make_ms("b", 0.7, 10000.0)};
  s.app.dataflows = {{"a", "b", 100.0}};
  s.devices = {make_device("d1", 1000.0, 30.0, 5.0),
               make_device("d2", 1000.0, 30.0, 5.0)};
  s.registries = {{"hub"}, {"regional"}};
  for (const char* reg : {"hub", "regional"}) {
    s.links.registry_bw[{reg, "d1"}] = reg == std::string("hub") ? 10.0 : 100.0;
    s.links.registry_bw[{reg, "d2"}] = reg == std::string("hub") ? 10.0 : 100.0;
  }
  s.links.device_bw[{"d1", "d2"}] = 50.0;
  s.links.device_bw[{"d2", "d1"}] = 50.0;
  return validate(s);
}

Placement split_placement() {
  Placement p;
  p.sched = {{"a", "d2"}, {"b", "d1"}};
  p.regist = {{"a", "hub"}, {"b", "hub"}};
  return p;
}

// One device, warm cache: completion times reduce to processing times, which
// makes makespan arithmetic exact.
Scenario warm_graph(const std::vector<Microservice>& services,
                    const std::vector<Dataflow>& flows) {
  Scenario s;
  s.name = "warm-graph";
  s.cache_mode = CacheMode::Warm;
  s.app.microservices = services;
  s.app.dataflows = flows;
  s.devices = {make_device("d1", 1000.0, 10.0, 1.0)};
  s.registries = {{"hub"}};
  s.links.registry_bw[{"hub", "d1"}] = 10.0;
  return validate(s);
}

Placement all_on(const Scenario& s, const std::string& device,
                 const std::string& registry) {
  Placement p;
  for (const auto& ms : s.app.microservices) {
    p.sched[ms.id] = device;
    p.regist[ms.id] = registry;
  }
  return p;
}

}  // namespace

TEST_CASE("deployment time: pull size over registry bandwidth, cache-aware") {
  const Scenario s = worked_example();

  SUBCASE("cold pull of an absent image") {
    CacheState cache(CacheMode::Cold);
    const auto& b = *s.app.find("b");
    CHECK(deployment_time(b, "hub", "d1", s.links, cache) ==
          Approx(70.0).epsilon(kTightRel));
    // The image is now on d1 but not on d2.
    CHECK(deployment_time(b, "hub", "d1", s.links, cache) == 0.0);
    CHECK(deployment_time(b, "hub", "d2", s.links, cache) ==
          Approx(70.0).epsilon(kTightRel));
  }
  SUBCASE("warm mode never pays") {
    CacheState cache(CacheMode::Warm);
    CHECK(deployment_time(*s.app.find("b"), "hub", "d1", s.links, cache) == 0.0);
  }
  SUBCASE("5.78 GB at 100 MB/s") {
    CacheState cache(CacheMode::Cold);
    const Microservice big = make_ms("big", 5.78, 1000.0);
    CHECK(deployment_time(big, "regional", "d1", s.links, cache) ==
          Approx(57.8).epsilon(kTightRel));
  }
  SUBCASE("unknown registry link") {
    CacheState cache(CacheMode::Cold);
    CHECK_THROWS_AS(
        deployment_time(*s.app.find("b"), "mirror", "d1", s.links, cache),
        Error);
  }
}

TEST_CASE("transfer time: payload over device bandwidth, free in place") {
  const Scenario s = worked_example();
  const Dataflow& df = s.app.dataflows[0];
  CHECK(transfer_time(df, "d2", "d1", s.links) ==
        Approx(2.0).epsilon(kTightRel));
  CHECK(transfer_time(df, "d1", "d1", s.links) == 0.0);
  const Dataflow empty{"a", "b", 0.0};
  CHECK(transfer_time(empty, "d2", "d1", s.links) == 0.0);
}

TEST_CASE("processing time: load over speed") {
  const Device dev = make_device("d", 1000.0, 1.0, 0.0);
  CHECK(processing_time(make_ms("x", 1.0, 10000.0), dev) ==
        Approx(10.0).epsilon(kTightRel));
  CHECK(processing_time(make_ms("y", 1.0, 0.0), dev) == 0.0);
}

TEST_CASE("completion time composes the three terms") {
  const Scenario s = worked_example();
  const Placement p = split_placement();

  SUBCASE("70 + 2 + 10 = 82") {
    CacheState cache(CacheMode::Cold);
    (void)completion_time("a", s, p, cache);  // upstream evaluated first
    const CostBreakdown b = completion_time("b", s, p, cache);
    CHECK(b.t_deploy_s == Approx(70.0).epsilon(kTightRel));
    CHECK(b.t_transfer_s == Approx(2.0).epsilon(kTightRel));
    CHECK(b.t_process_s == Approx(10.0).epsilon(kTightRel));
    CHECK(b.ct_s == Approx(82.0).epsilon(kTightRel));
    CHECK(b.ct_s ==
          Approx(b.t_deploy_s + b.t_transfer_s + b.t_process_s)
              .epsilon(kTightRel));
  }
  SUBCASE("source under a warm cache is processing only") {
    CacheState cache(CacheMode::Warm);
    const CostBreakdown a = completion_time("a", s, p, cache);
    CHECK(a.t_deploy_s == 0.0);
    CHECK(a.t_transfer_s == 0.0);
    CHECK(a.ct_s == a.t_process_s);
  }
}

TEST_CASE("a barrier node receives its inputs serially") {
  Scenario s;
  s.name = "barrier";
  s.app.microservices = {make_ms("u1", 0.5, 1000.0), make_ms("u2", 0.5, 1000.0),
                         make_ms("sink", 0.5, 1000.0)};
  s.app.dataflows = {{"u1", "sink", 100.0}, {"u2", "sink", 100.0}};
  s.devices = {make_device("dA", 1000.0, 1.0, 0.0),
               make_device("dB", 1000.0, 1.0, 0.0),
               make_device("dC", 1000.0, 1.0, 0.0)};
  s.registries = {{"hub"}};
  for (const char* dev : {"dA", "dB", "dC"}) {
    s.links.registry_bw[{"hub", dev}] = 10.0;
  }
  for (const char* from : {"dA", "dB", "dC"}) {
    for (const char* to : {"dA", "dB", "dC"}) {
      if (from != to) s.links.device_bw[{from, to}] = 50.0;
    }
  }
  validate(s);

  Placement p;
  p.sched = {{"u1", "dA"}, {"u2", "dB"}, {"sink", "dC"}};
  p.regist = {{"u1", "hub"}, {"u2", "hub"}, {"sink", "hub"}};
  CacheState cache(CacheMode::Warm);
  const CostBreakdown sink = completion_time("sink", s, p, cache);
  CHECK(sink.t_transfer_s == Approx(4.0).epsilon(kTightRel));
}

TEST_CASE("energy is power times the completion window") {
  const Scenario s = worked_example();
  const Placement p = split_placement();

  SUBCASE("ct 82 s at 30 W + 5 W") {
    CacheState cache(CacheMode::Cold);
    (void)energy("a", s, p, cache);
    const CostBreakdown b = energy("b", s, p, cache);
    CHECK(b.e_active_j == Approx(2460.0).epsilon(kTightRel));
    CHECK(b.e_static_j == Approx(410.0).epsilon(kTightRel));
    CHECK(b.ec_j == Approx(2870.0).epsilon(kTightRel));
    CHECK(b.ec_j == Approx(b.e_active_j + b.e_static_j).epsilon(kTightRel));
  }
  SUBCASE("zero static power collapses ec to the active term") {
    Scenario zero = s;
    for (auto& d : zero.devices) d.static_power_w = 0.0;
    CacheState cache(CacheMode::Cold);
    (void)energy("a", zero, p, cache);
    const CostBreakdown b = energy("b", zero, p, cache);
    CHECK(b.e_static_j == 0.0);
    CHECK(b.ec_j == b.e_active_j);
  }
}

TEST_CASE("total energy sums the per-microservice energies in topo order") {
  SUBCASE("two identical independent microservices add up") {
    Scenario s = warm_graph({make_ms("a", 0.5, 10000.0),
                             make_ms("b", 0.5, 10000.0)},
                            {});
    // 10 s at 10 W + 1 W each.
    const auto report =
        total_energy(s, all_on(s, "d1", "hub"), CacheMode::Warm);
    CHECK(report.total_j == Approx(220.0).epsilon(kTightRel));
    CHECK(report.breakdown.size() == 2);
    CHECK(report.breakdown[0].ec_j == Approx(110.0).epsilon(kTightRel));
  }
  SUBCASE("empty application is zero") {
    Scenario s = warm_graph({}, {});
    const auto report = total_energy(s, Placement{}, CacheMode::Warm);
    CHECK(report.total_j == 0.0);
    CHECK(report.breakdown.empty());
  }
  SUBCASE("breakdown follows topological order") {
    const Scenario text = bundled_text_scenario();
    const auto report =
        total_energy(text, all_on(text, "medium", "hub"), CacheMode::Cold);
    REQUIRE(report.breakdown.size() == 6);
    CHECK(report.breakdown.front().microservice == "retrieve");
    CHECK(report.breakdown.back().microservice == "la-score");
  }
}

TEST_CASE("warm evaluation never exceeds cold") {
  const Scenario text = bundled_text_scenario();
  const Placement p = all_on(text, "medium", "hub");
  const double cold = total_energy(text, p, CacheMode::Cold).total_j;
  const double warm = total_energy(text, p, CacheMode::Warm).total_j;
  CHECK(warm <= cold);

  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const Scenario r = random_scenario(seed);
    const Placement rp = all_on(r, "dev-a", "hub");
    CHECK(total_energy(r, rp, CacheMode::Warm).total_j <=
          total_energy(r, rp, CacheMode::Cold).total_j);
  }
}

TEST_CASE("more bandwidth or speed never hurts") {
  const Scenario text = bundled_text_scenario();
  const Placement p = all_on(text, "medium", "hub");
  const auto before = total_energy(text, p, CacheMode::Cold);

  SUBCASE("faster registry link") {
    Scenario faster = text;
    faster.links.registry_bw[{"hub", "medium"}] *= 3.0;
    const auto after = total_energy(faster, p, CacheMode::Cold);
    for (std::size_t i = 0; i < before.breakdown.size(); ++i) {
      CHECK(after.breakdown[i].ct_s <= before.breakdown[i].ct_s);
    }
  }
  SUBCASE("faster cpu") {
    Scenario faster = text;
    for (auto& d : faster.devices) d.cpu_speed_mips *= 2.0;
    const auto after = total_energy(faster, p, CacheMode::Cold);
    for (std::size_t i = 0; i < before.breakdown.size(); ++i) {
      CHECK(after.breakdown[i].t_process_s <= before.breakdown[i].t_process_s);
    }
  }
}

TEST_CASE("makespan: serial sums, critical path takes the longest chain") {
  SUBCASE("chain 10 s then 20 s") {
    Scenario s = warm_graph(
        {make_ms("a", 0.5, 10000.0), make_ms("b", 0.5, 20000.0)},
        {{"a", "b", 10.0}});
    const Placement p = all_on(s, "d1", "hub");
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::Serial) ==
          Approx(30.0).epsilon(kTightRel));
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::CriticalPath) ==
          Approx(30.0).epsilon(kTightRel));
  }
  SUBCASE("fork: 5 s parent, two 10 s children") {
    Scenario s = warm_graph(
        {make_ms("p", 0.5, 5000.0), make_ms("c1", 0.5, 10000.0),
         make_ms("c2", 0.5, 10000.0)},
        {{"p", "c1", 10.0}, {"p", "c2", 10.0}});
    const Placement p = all_on(s, "d1", "hub");
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::Serial) ==
          Approx(25.0).epsilon(kTightRel));
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::CriticalPath) ==
          Approx(15.0).epsilon(kTightRel));
  }
  SUBCASE("single node") {
    Scenario s = warm_graph({make_ms("only", 0.5, 7000.0)}, {});
    const Placement p = all_on(s, "d1", "hub");
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::Serial) ==
          Approx(7.0).epsilon(kTightRel));
    CHECK(makespan(s, p, CacheMode::Warm, MakespanMode::CriticalPath) ==
          Approx(7.0).epsilon(kTightRel));
  }
}

TEST_CASE("joint storage accounts images plus workspaces per device") {
  const Scenario text = bundled_text_scenario();

  SUBCASE("the whole text pipeline overflows the small device") {
    CHECK_FALSE(joint_storage_ok(text, all_on(text, "small", "hub")));
  }
  SUBCASE("any five fit after moving one away") {
    Placement p = all_on(text, "small", "hub");
    p.sched["retrieve"] = "medium";
    CHECK(joint_storage_ok(text, p));
  }
  SUBCASE("the medium device holds everything") {
    CHECK(joint_storage_ok(text, all_on(text, "medium", "hub")));
  }
}

TEST_CASE("placement validation rejects infeasible assignments") {
  const Scenario text = bundled_text_scenario();

  SUBCASE("a valid placement passes") {
    CHECK_NOTHROW(validate_placement(text, all_on(text, "medium", "hub")));
  }
  SUBCASE("joint storage overflow") {
    CHECK_THROWS_AS(validate_placement(text, all_on(text, "small", "hub")),
                    Error);
  }
  SUBCASE("core requirement broken on the small device") {
    Scenario tight = text;
    for (auto& d : tight.devices) {
      if (d.id == "small") d.cores = 2;
    }
    // ha-train needs 4 cores.
    Placement p = all_on(tight, "medium", "hub");
    p.sched["ha-train"] = "small";
    CHECK_THROWS_AS(validate_placement(tight, p), Error);
  }
}

TEST_CASE("scaling both power constants scales energy linearly") {
  const Scenario text = bundled_text_scenario();
  const Placement p = all_on(text, "medium", "hub");
  const double base = total_energy(text, p, CacheMode::Cold).total_j;
  const Scenario scaled = scale_powers(text, 7.0);
  const double seven = total_energy(scaled, p, CacheMode::Cold).total_j;
  CHECK(seven == Approx(7.0 * base).epsilon(kTightRel));
}
