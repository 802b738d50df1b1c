#include "edgeplace/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "edgeplace/error.hpp"
#include "edgeplace/validate.hpp"

namespace edgeplace {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool_or(const json& j, const char* key, const std::string& path,
                 bool fallback) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

const json& require_array(const json& j, const char* key,
                          const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) fail(path + "." + key, "expected an array");
  return v;
}

std::string indexed(const std::string& path, const char* key, size_t i) {
  return path + "." + key + "[" + std::to_string(i) + "]";
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  const std::string root = "scenario";
  Scenario s;
  s.name = get_string(j, "name", root);
  if (const auto it = j.find("description"); it != j.end()) {
    if (!it->is_string()) fail(root + ".description", "expected a string");
    s.description = it->get<std::string>();
  }
  if (const auto it = j.find("cache_mode"); it != j.end()) {
    if (!it->is_string()) fail(root + ".cache_mode", "expected a string");
    s.cache_mode = cache_mode_from_string(it->get<std::string>());
  }

  const json& app = require(j, "application", root);
  const std::string app_path = root + ".application";
  const json& services = require_array(app, "microservices", app_path);
  for (size_t i = 0; i < services.size(); ++i) {
    const std::string path = indexed(app_path, "microservices", i);
    const json& mj = services[i];
    Microservice ms;
    ms.id = get_string(mj, "id", path);
    ms.image_size_gb = get_number(mj, "image_size_gb", path);
    ms.req.cores = get_int(mj, "cores", path);
    ms.req.cpu_load_mi = get_number(mj, "cpu_load_mi", path);
    ms.req.mem_gb = get_number(mj, "mem_gb", path);
    ms.req.stor_gb = get_number(mj, "stor_gb", path);
    ms.source = get_bool_or(mj, "source", path, false);
    s.app.microservices.push_back(std::move(ms));
  }
  const json& flows = require_array(app, "dataflows", app_path);
  for (size_t i = 0; i < flows.size(); ++i) {
    const std::string path = indexed(app_path, "dataflows", i);
    const json& fj = flows[i];
    Dataflow df;
    df.upstream = get_string(fj, "from", path);
    df.downstream = get_string(fj, "to", path);
    df.size_mb = get_number(fj, "size_mb", path);
    s.app.dataflows.push_back(std::move(df));
  }

  const json& devices = require_array(j, "devices", root);
  for (size_t i = 0; i < devices.size(); ++i) {
    const std::string path = indexed(root, "devices", i);
    const json& dj = devices[i];
    Device d;
    d.id = get_string(dj, "id", path);
    d.cores = get_int(dj, "cores", path);
    d.cpu_speed_mips = get_number(dj, "cpu_speed_mips", path);
    d.mem_gb = get_number(dj, "mem_gb", path);
    d.stor_gb = get_number(dj, "stor_gb", path);
    d.active_power_w = get_number(dj, "active_power_w", path);
    d.static_power_w = get_number(dj, "static_power_w", path);
    s.devices.push_back(std::move(d));
  }

  const json& registries = require_array(j, "registries", root);
  for (size_t i = 0; i < registries.size(); ++i) {
    const std::string path = indexed(root, "registries", i);
    Registry r;
    r.id = get_string(registries[i], "id", path);
    s.registries.push_back(std::move(r));
  }

  const json& links = require(j, "links", root);
  const std::string links_path = root + ".links";
  const json& device_bw = require_array(links, "device_bw", links_path);
  for (size_t i = 0; i < device_bw.size(); ++i) {
    const std::string path = indexed(links_path, "device_bw", i);
    const json& lj = device_bw[i];
    s.links.device_bw[{get_string(lj, "from", path),
                       get_string(lj, "to", path)}] =
        get_number(lj, "mb_per_s", path);
  }
  const json& registry_bw = require_array(links, "registry_bw", links_path);
  for (size_t i = 0; i < registry_bw.size(); ++i) {
    const std::string path = indexed(links_path, "registry_bw", i);
    const json& lj = registry_bw[i];
    s.links.registry_bw[{get_string(lj, "registry", path),
                         get_string(lj, "device", path)}] =
        get_number(lj, "mb_per_s", path);
  }

  if (const auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) fail(root + ".metadata", "expected an object");
    s.metadata = *it;
  }
  return validate(s);
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open \"" + path + "\" for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::IoError, "failed while reading \"" + path + "\"");
  }
  return parse_scenario(buffer.str());
}

nlohmann::json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["cache_mode"] = to_string(s.cache_mode);

  json services = json::array();
  for (const auto& ms : s.app.microservices) {
    json mj;
    mj["id"] = ms.id;
    mj["image_size_gb"] = ms.image_size_gb;
    mj["cores"] = ms.req.cores;
    mj["cpu_load_mi"] = ms.req.cpu_load_mi;
    mj["mem_gb"] = ms.req.mem_gb;
    mj["stor_gb"] = ms.req.stor_gb;
    mj["source"] = ms.source;
    services.push_back(std::move(mj));
  }
  json flows = json::array();
  for (const auto& df : s.app.dataflows) {
    json fj;
    fj["from"] = df.upstream;
    fj["to"] = df.downstream;
    fj["size_mb"] = df.size_mb;
    flows.push_back(std::move(fj));
  }
  j["application"]["microservices"] = std::move(services);
  j["application"]["dataflows"] = std::move(flows);

  json devices = json::array();
  for (const auto& d : s.devices) {
    json dj;
    dj["id"] = d.id;
    dj["cores"] = d.cores;
    dj["cpu_speed_mips"] = d.cpu_speed_mips;
    dj["mem_gb"] = d.mem_gb;
    dj["stor_gb"] = d.stor_gb;
    dj["active_power_w"] = d.active_power_w;
    dj["static_power_w"] = d.static_power_w;
    devices.push_back(std::move(dj));
  }
  j["devices"] = std::move(devices);

  json registries = json::array();
  for (const auto& r : s.registries) {
    registries.push_back(json{{"id", r.id}});
  }
  j["registries"] = std::move(registries);

  json device_bw = json::array();
  for (const auto& [key, mbps] : s.links.device_bw) {
    device_bw.push_back(
        json{{"from", key.first}, {"to", key.second}, {"mb_per_s", mbps}});
  }
  json registry_bw = json::array();
  for (const auto& [key, mbps] : s.links.registry_bw) {
    registry_bw.push_back(json{
        {"registry", key.first}, {"device", key.second}, {"mb_per_s", mbps}});
  }
  j["links"]["device_bw"] = std::move(device_bw);
  j["links"]["registry_bw"] = std::move(registry_bw);

  if (!s.metadata.is_null()) j["metadata"] = s.metadata;
  return j;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open \"" + path + "\" for writing");
  }
  out << scenario_to_json(s).dump(2) << "\n";
  if (!out) {
    throw Error(ErrorCode::IoError, "failed while writing \"" + path + "\"");
  }
}

}  // namespace edgeplace
