#include "pulsesim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pulsesim {

namespace {

using nlohmann::json;

const std::map<std::string, std::set<std::string>>& known_params() {
  static const std::map<std::string, std::set<std::string>> k{
      {"spinchain", {"sx", "sz", "sxsy"}},
      {"scqubits", {"levels", "alpha", "omega_max", "cr_strength", "gate_time", "zz_crosstalk", "samples"}},
      {"cavityqed", {"levels", "delta", "g", "sx", "sy", "ramp", "samples"}},
  };
  return k;
}

CoherenceTimes read_times(const json& v, int n, const char* name) {
  if (v.is_null()) return {};
  if (v.is_number()) return uniform_times(n, v.get<double>());
  if (!v.is_array()) throw ConfigError(std::string(name) + " must be a number, null or a list");
  if (static_cast<int>(v.size()) != n) throw ConfigError(std::string(name) + " list length must equal num_qubits");
  CoherenceTimes out;
  for (const json& e : v) {
    if (e.is_null()) {
      out.push_back(std::nullopt);
    } else if (e.is_number()) {
      out.push_back(e.get<double>());
    } else {
      throw ConfigError(std::string(name) + " entries must be numbers or null");
    }
  }
  return out;
}

json times_json(const CoherenceTimes& t) {
  if (t.empty()) return nullptr;
  json arr = json::array();
  for (const auto& v : t) arr.push_back(v ? json(*v) : json(nullptr));
  return arr;
}

int as_count(double v, const char* name) {
  if (v != std::floor(v) || v < 1 || v > 1e6) throw ConfigError(std::string(name) + " must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

DeviceConfig parse_device_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> keys{"model", "num_qubits", "params", "boundary", "interpolation", "t1", "t2"};
  for (const auto& [k, v] : doc.items())
    if (!keys.count(k)) throw ConfigError("unknown config key '" + k + "'");

  DeviceConfig cfg;
  if (!doc.contains("model") || !doc["model"].is_string()) throw ConfigError("config needs a model name");
  cfg.model = doc["model"].get<std::string>();
  const auto kp = known_params().find(cfg.model);
  if (kp == known_params().end()) throw ConfigError("unknown model '" + cfg.model + "'");
  if (!doc.contains("num_qubits") || !doc["num_qubits"].is_number_integer())
    throw ConfigError("num_qubits must be an integer");
  cfg.num_qubits = doc["num_qubits"].get<int>();
  if (cfg.num_qubits < 1 || cfg.num_qubits > 16) throw ConfigError("num_qubits must be in [1, 16]");

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw ConfigError("params must be an object");
    for (const auto& [k, v] : doc["params"].items()) {
      if (!kp->second.count(k)) throw ConfigError("unknown parameter '" + k + "' for model " + cfg.model);
      if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
      cfg.params[k] = v.get<double>();
    }
  }
  if (doc.contains("boundary")) {
    const std::string b = doc["boundary"].is_string() ? doc["boundary"].get<std::string>() : "";
    if (b != "open" && b != "closed") throw ConfigError("boundary must be 'open' or 'closed'");
    if (cfg.model != "spinchain" && b == "closed") throw ConfigError("closed boundary needs the spinchain model");
    cfg.closed = b == "closed";
  }
  if (doc.contains("interpolation")) {
    const std::string i = doc["interpolation"].is_string() ? doc["interpolation"].get<std::string>() : "";
    if (i != "step" && i != "cubic") throw ConfigError("interpolation must be 'step' or 'cubic'");
    cfg.interp = i == "cubic" ? Interpolation::Cubic : Interpolation::Step;
  }
  cfg.decoherence.t1 = read_times(doc.value("t1", json()), cfg.num_qubits, "t1");
  cfg.decoherence.t2 = read_times(doc.value("t2", json()), cfg.num_qubits, "t2");
  try {
    DecoherenceNoise check(cfg.decoherence);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

DeviceConfig load_device_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_device_config(ss.str());
}

std::string device_config_to_json(const DeviceConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["model"] = cfg.model;
  doc["num_qubits"] = cfg.num_qubits;
  doc["params"] = cfg.params;
  doc["boundary"] = cfg.closed ? "closed" : "open";
  doc["interpolation"] = cfg.interp == Interpolation::Cubic ? "cubic" : "step";
  doc["t1"] = times_json(cfg.decoherence.t1);
  doc["t2"] = times_json(cfg.decoherence.t2);
  return doc.dump(2);
}

std::shared_ptr<const HardwareModel> make_model(const DeviceConfig& cfg) {
  auto get = [&](const char* k, double fallback) {
    auto it = cfg.params.find(k);
    return it == cfg.params.end() ? fallback : it->second;
  };
  try {
    if (cfg.model == "spinchain") {
      SpinChainParams p;
      p.sx = get("sx", p.sx);
      p.sz = get("sz", p.sz);
      p.sxsy = get("sxsy", p.sxsy);
      p.boundary = cfg.closed ? Boundary::Closed : Boundary::Open;
      return std::make_shared<SpinChainModel>(cfg.num_qubits, p);
    }
    if (cfg.model == "scqubits") {
      SCQubitsParams p;
      p.levels = as_count(get("levels", p.levels), "levels");
      p.alpha = get("alpha", p.alpha);
      p.omega_max = get("omega_max", p.omega_max);
      p.cr_strength = get("cr_strength", p.cr_strength);
      p.gate_time = get("gate_time", p.gate_time);
      p.zz_crosstalk = get("zz_crosstalk", p.zz_crosstalk);
      p.samples = as_count(get("samples", p.samples), "samples");
      return std::make_shared<SCQubitsModel>(cfg.num_qubits, p);
    }
    if (cfg.model == "cavityqed") {
      CavityQEDParams p;
      p.levels = as_count(get("levels", p.levels), "levels");
      p.delta = get("delta", p.delta);
      p.g = get("g", p.g);
      p.sx = get("sx", p.sx);
      p.sy = get("sy", p.sy);
      p.ramp = get("ramp", p.ramp);
      p.samples = as_count(get("samples", p.samples), "samples");
      return std::make_shared<CavityQEDModel>(cfg.num_qubits, p);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown model '" + cfg.model + "'");
}

Processor make_processor(const DeviceConfig& cfg) {
  try {
    return Processor(make_model(cfg), cfg.decoherence, cfg.interp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace pulsesim
