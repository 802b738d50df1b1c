#include "edgeplace/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "edgeplace/error.hpp"

namespace edgeplace {

namespace {

void check_positive(double value, const std::string& what) {
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << what << " must be > 0, got " << value;
    throw Error(ErrorCode::NonPositiveCapacity, msg.str());
  }
}

void check_nonnegative(double value, const std::string& what) {
  if (!(value >= 0.0)) {
    std::ostringstream msg;
    msg << what << " must be >= 0, got " << value;
    throw Error(ErrorCode::NonPositiveCapacity, msg.str());
  }
}

// Walks one cycle and names it in the error message.
[[noreturn]] void report_cycle(const Application& app) {
  std::map<std::string, std::vector<std::string>> next;
  for (const auto& df : app.dataflows) next[df.upstream].push_back(df.downstream);

  std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> dfs = [&](const std::string& node) {
    state[node] = 1;
    stack.push_back(node);
    for (const auto& to : next[node]) {
      if (state[to] == 1) {
        auto it = std::find(stack.begin(), stack.end(), to);
        cycle.assign(it, stack.end());
        cycle.push_back(to);
        return true;
      }
      if (state[to] == 0 && dfs(to)) return true;
    }
    stack.pop_back();
    state[node] = 2;
    return false;
  };

  for (const auto& ms : app.microservices) {
    if (state[ms.id] == 0 && dfs(ms.id)) break;
  }

  std::ostringstream msg;
  msg << "application.dataflows contains a cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) msg << " -> ";
    msg << cycle[i];
  }
  throw Error(ErrorCode::CycleDetected, msg.str());
}

}  // namespace

Scenario validate(const Scenario& scenario) {
  // Devices.
  std::set<std::string> device_ids;
  for (const auto& dev : scenario.devices) {
    if (!device_ids.insert(dev.id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate device id \"" + dev.id + "\"");
    }
    const std::string at = "devices[" + dev.id + "].";
    if (dev.cores <= 0) {
      throw Error(ErrorCode::NonPositiveCapacity, at + "cores must be > 0");
    }
    check_positive(dev.cpu_speed_mips, at + "cpu_speed_mips");
    check_positive(dev.mem_gb, at + "mem_gb");
    check_positive(dev.stor_gb, at + "stor_gb");
    check_positive(dev.active_power_w, at + "active_power_w");
    check_nonnegative(dev.static_power_w, at + "static_power_w");
  }

  // Registries.
  std::set<std::string> registry_ids;
  for (const auto& reg : scenario.registries) {
    if (!registry_ids.insert(reg.id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate registry id \"" + reg.id + "\"");
    }
  }

  // Microservices.
  std::set<std::string> ms_ids;
  for (const auto& ms : scenario.app.microservices) {
    if (!ms_ids.insert(ms.id).second) {
      throw Error(ErrorCode::DuplicateId,
                  "duplicate microservice id \"" + ms.id + "\"");
    }
    const std::string at = "application.microservices[" + ms.id + "].";
    check_positive(ms.image_size_gb, at + "image_size_gb");
    if (ms.req.cores <= 0) {
      throw Error(ErrorCode::NonPositiveCapacity, at + "cores must be > 0");
    }
    if (ms.source) {
      check_nonnegative(ms.req.cpu_load_mi, at + "cpu_load_mi");
    } else if (!(ms.req.cpu_load_mi > 0.0)) {
      throw Error(ErrorCode::NonPositiveCapacity,
                  at + "cpu_load_mi must be > 0 (only source microservices may be 0)");
    }
    check_positive(ms.req.mem_gb, at + "mem_gb");
    check_positive(ms.req.stor_gb, at + "stor_gb");
  }

  // Dataflows.
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& df : scenario.app.dataflows) {
    const std::string at =
        "application.dataflows[" + df.upstream + " -> " + df.downstream + "]";
    if (ms_ids.count(df.upstream) == 0) {
      throw Error(ErrorCode::DanglingEdge,
                  at + " upstream names an unknown microservice");
    }
    if (ms_ids.count(df.downstream) == 0) {
      throw Error(ErrorCode::DanglingEdge,
                  at + " downstream names an unknown microservice");
    }
    if (df.upstream == df.downstream) {
      throw Error(ErrorCode::CycleDetected, at + " is a self loop");
    }
    if (!edges.insert({df.upstream, df.downstream}).second) {
      throw Error(ErrorCode::DuplicateId, at + " appears twice");
    }
    check_nonnegative(df.size_mb, at + ".size_mb");
  }

  // Acyclicity (topo_order throws CycleDetected with the cycle named).
  topo_order(scenario.app);

  // Link table: full registry x device and ordered device-pair coverage, all
  // positive, no diagonal entries.
  for (const auto& [key, bw] : scenario.links.registry_bw) {
    const std::string at =
        "links.registry_bw[" + key.first + " -> " + key.second + "]";
    if (registry_ids.count(key.first) == 0) {
      throw Error(ErrorCode::DanglingEdge, at + " names an unknown registry");
    }
    if (device_ids.count(key.second) == 0) {
      throw Error(ErrorCode::DanglingEdge, at + " names an unknown device");
    }
    check_positive(bw, at + ".mb_per_s");
  }
  for (const auto& [key, bw] : scenario.links.device_bw) {
    const std::string at =
        "links.device_bw[" + key.first + " -> " + key.second + "]";
    if (device_ids.count(key.first) == 0 || device_ids.count(key.second) == 0) {
      throw Error(ErrorCode::DanglingEdge, at + " names an unknown device");
    }
    if (key.first == key.second) {
      throw Error(ErrorCode::InvalidValue,
                  at + " is a self link (intra-device transfers are implicit)");
    }
    check_positive(bw, at + ".mb_per_s");
  }
  for (const auto& reg : scenario.registries) {
    for (const auto& dev : scenario.devices) {
      if (scenario.links.registry_bw.count({reg.id, dev.id}) == 0) {
        throw Error(ErrorCode::MissingLink, "links.registry_bw lacks (" +
                                                reg.id + " -> " + dev.id + ")");
      }
    }
  }
  for (const auto& a : scenario.devices) {
    for (const auto& b : scenario.devices) {
      if (a.id == b.id) continue;
      if (scenario.links.device_bw.count({a.id, b.id}) == 0) {
        throw Error(ErrorCode::MissingLink,
                    "links.device_bw lacks (" + a.id + " -> " + b.id + ")");
      }
    }
  }

  return scenario;
}

std::vector<std::string> topo_order(const Application& app) {
  std::map<std::string, int> in_degree;
  std::map<std::string, std::vector<std::string>> next;
  for (const auto& ms : app.microservices) in_degree[ms.id] = 0;
  for (const auto& df : app.dataflows) {
    // Unknown endpoints are a validate() concern; ignore them here so
    // topo_order is usable standalone.
    if (in_degree.count(df.upstream) == 0 || in_degree.count(df.downstream) == 0)
      continue;
    ++in_degree[df.downstream];
    next[df.upstream].push_back(df.downstream);
  }

  // Frontier-by-frontier so parallel stages come out adjacent; std::map keeps
  // each frontier in ascending id order already.
  std::vector<std::string> frontier;
  for (const auto& [id, deg] : in_degree) {
    if (deg == 0) frontier.push_back(id);
  }

  std::vector<std::string> order;
  while (!frontier.empty()) {
    std::vector<std::string> released;
    for (const auto& id : frontier) {
      order.push_back(id);
      for (const auto& to : next[id]) {
        if (--in_degree[to] == 0) released.push_back(to);
      }
    }
    std::sort(released.begin(), released.end());
    frontier = std::move(released);
  }

  if (order.size() != app.microservices.size()) report_cycle(app);
  return order;
}

std::vector<std::string> barriers(const Application& app) {
  std::map<std::string, int> in_degree;
  for (const auto& df : app.dataflows) ++in_degree[df.downstream];
  std::vector<std::string> result;
  for (const auto& [id, deg] : in_degree) {
    if (deg >= 2) result.push_back(id);
  }
  return result;  // map iteration is already ascending by id
}

std::vector<std::pair<std::string, std::string>> feasible_strategies(
    const Microservice& ms, const std::vector<Device>& devices,
    const std::vector<Registry>& registries) {
  std::vector<std::string> admissible;
  for (const auto& dev : devices) {
    if (ms.req.cores <= dev.cores && ms.req.mem_gb <= dev.mem_gb &&
        ms.req.stor_gb + ms.image_size_gb <= dev.stor_gb) {
      admissible.push_back(dev.id);
    }
  }
  std::sort(admissible.begin(), admissible.end());

  std::vector<std::string> regs;
  for (const auto& reg : registries) regs.push_back(reg.id);
  std::sort(regs.begin(), regs.end());

  std::vector<std::pair<std::string, std::string>> result;
  for (const auto& reg : regs) {
    for (const auto& dev : admissible) result.emplace_back(reg, dev);
  }
  if (result.empty()) {
    throw Error(ErrorCode::NoFeasibleStrategy,
                "microservice \"" + ms.id + "\" fits no device");
  }
  return result;
}

}  // namespace edgeplace
