#include "edgeplace/types.hpp"

#include "edgeplace/error.hpp"

namespace edgeplace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::CycleDetected: return "cycle-detected";
    case ErrorCode::DanglingEdge: return "dangling-edge";
    case ErrorCode::MissingLink: return "missing-link";
    case ErrorCode::NonPositiveCapacity: return "non-positive-capacity";
    case ErrorCode::DuplicateId: return "duplicate-id";
    case ErrorCode::InvalidValue: return "invalid-value";
    case ErrorCode::NoFeasibleStrategy: return "no-feasible-strategy";
    case ErrorCode::SpaceTooLarge: return "space-too-large";
    case ErrorCode::NonConvergence: return "non-convergence";
  }
  return "unknown";
}

const Microservice* Application::find(const std::string& id) const {
  for (const auto& ms : microservices) {
    if (ms.id == id) return &ms;
  }
  return nullptr;
}

double LinkTable::device_bandwidth(const std::string& from,
                                   const std::string& to) const {
  auto it = device_bw.find({from, to});
  if (it == device_bw.end()) {
    throw Error(ErrorCode::MissingLink,
                "no device link (" + from + " -> " + to + ") in links.device_bw");
  }
  return it->second;
}

double LinkTable::registry_bandwidth(const std::string& registry,
                                     const std::string& device) const {
  auto it = registry_bw.find({registry, device});
  if (it == registry_bw.end()) {
    throw Error(ErrorCode::MissingLink, "no registry link (" + registry +
                                            " -> " + device +
                                            ") in links.registry_bw");
  }
  return it->second;
}

const char* to_string(CacheMode mode) {
  return mode == CacheMode::Cold ? "cold" : "warm";
}

CacheMode cache_mode_from_string(const std::string& text) {
  if (text == "cold") return CacheMode::Cold;
  if (text == "warm") return CacheMode::Warm;
  throw Error(ErrorCode::InvalidValue,
              "cache_mode must be \"cold\" or \"warm\", got \"" + text + "\"");
}

const Device* Scenario::find_device(const std::string& id) const {
  for (const auto& dev : devices) {
    if (dev.id == id) return &dev;
  }
  return nullptr;
}

}  // namespace edgeplace
