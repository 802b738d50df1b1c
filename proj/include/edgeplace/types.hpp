#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace edgeplace {

// Resources a microservice needs from its host device. All fields must be
// positive, except cpu_load_mi which may be zero for source microservices
// (ingest stages that only emit data).
struct Requirements {
  int cores = 0;
  double cpu_load_mi = 0.0;  // work per run, in million instructions
  double mem_gb = 0.0;
  double stor_gb = 0.0;      // workspace, on top of the container image

  bool operator==(const Requirements&) const = default;
};

struct Microservice {
  std::string id;
  double image_size_gb = 0.0;  // container image pulled from a registry
  Requirements req;
  bool source = false;         // entry stage of the dataflow graph

  bool operator==(const Microservice&) const = default;
};

// Directed payload handoff between two microservices. size_mb may be zero
// (pure ordering dependency).
struct Dataflow {
  std::string upstream;
  std::string downstream;
  double size_mb = 0.0;

  bool operator==(const Dataflow&) const = default;
};

struct Application {
  std::vector<Microservice> microservices;
  std::vector<Dataflow> dataflows;

  const Microservice* find(const std::string& id) const;

  bool operator==(const Application&) const = default;
};

struct Device {
  std::string id;
  int cores = 0;
  double cpu_speed_mips = 0.0;  // million instructions per second
  double mem_gb = 0.0;
  double stor_gb = 0.0;
  double active_power_w = 0.0;  // draw while a microservice runs
  double static_power_w = 0.0;  // background draw attributed to the window

  bool operator==(const Device&) const = default;
};

struct Registry {
  std::string id;

  bool operator==(const Registry&) const = default;
};

// Bandwidths in MB/s. device_bw is keyed (from, to) for ordered device pairs;
// the diagonal is implicitly infinite (intra-device transfers are free) and
// must not appear. registry_bw is keyed (registry, device).
struct LinkTable {
  std::map<std::pair<std::string, std::string>, double> device_bw;
  std::map<std::pair<std::string, std::string>, double> registry_bw;

  // Both throw Error(MissingLink) when the entry is absent.
  double device_bandwidth(const std::string& from, const std::string& to) const;
  double registry_bandwidth(const std::string& registry,
                            const std::string& device) const;

  bool operator==(const LinkTable&) const = default;
};

enum class CacheMode { Cold, Warm };

const char* to_string(CacheMode mode);
CacheMode cache_mode_from_string(const std::string& text);

// A full problem instance: one application, the device fleet, the registries
// holding the images, and the bandwidth tables. metadata carries free-form
// provenance (calibration constants, generator seed, ...) and is preserved
// verbatim by serialization.
struct Scenario {
  std::string name;
  std::string description;
  CacheMode cache_mode = CacheMode::Cold;
  Application app;
  std::vector<Device> devices;
  std::vector<Registry> registries;
  LinkTable links;
  nlohmann::json metadata = nlohmann::json::object();

  const Device* find_device(const std::string& id) const;

  bool operator==(const Scenario&) const = default;
};

}  // namespace edgeplace
