#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "pulsesim/processor.hpp"

namespace pulsesim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Device description read from a JSON config:
/// {"model": "spinchain"|"cavityqed"|"scqubits", "num_qubits": n,
///  "params": {...}, "boundary": "open"|"closed", "interpolation": "step"|"cubic",
///  "t1": x | [x, ...], "t2": x | [x, ...]}.
/// Null entries in a t1/t2 list leave that qubit without decay.
struct DeviceConfig {
  std::string model;
  int num_qubits = 0;
  std::map<std::string, double> params;
  bool closed = false;
  Interpolation interp = Interpolation::Step;
  DecoherenceSpec decoherence;
};

DeviceConfig parse_device_config(const std::string& json_text);
DeviceConfig load_device_config(const std::string& path);

/// Normalized JSON with every field spelled out.
std::string device_config_to_json(const DeviceConfig& cfg);

std::shared_ptr<const HardwareModel> make_model(const DeviceConfig& cfg);
Processor make_processor(const DeviceConfig& cfg);

}  // namespace pulsesim
