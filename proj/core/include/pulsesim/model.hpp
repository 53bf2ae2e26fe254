#pragma once

#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pulsesim/circuit.hpp"
#include "pulsesim/pulse.hpp"

namespace pulsesim {

class GateCompiler;

/// Which qubit pairs can host a two-qubit gate directly.
enum class Topology { Chain, Ring, AllToAll };

struct Control {
  Operator op;
  std::vector<int> targets;
  double limit = std::numeric_limits<double>::infinity();
};

/// Drift, labelled controls, parameters and native gates of a device.
/// Qubit j is subsystem j; extra subsystems (a resonator) come last.
class HardwareModel {
 public:
  HardwareModel(int num_qubits, Dims dims);
  virtual ~HardwareModel() = default;

  int num_qubits() const { return num_qubits_; }
  const Dims& dims() const { return dims_; }
  const std::vector<Term>& drift() const { return drift_; }

  /// Labels in registration order.
  const std::vector<std::string>& control_labels() const { return labels_; }
  bool has_control(std::string_view label) const;
  const Control& get_control(std::string_view label) const;

  const std::map<std::string, double, std::less<>>& params() const { return params_; }
  double param(std::string_view name) const;

  const std::set<std::string>& native_gates() const { return native_; }
  Topology topology() const { return topology_; }

  /// Compiler for this device; the base model has none.
  virtual std::unique_ptr<GateCompiler> make_compiler() const;

  void add_control(std::string label, Operator op, std::vector<int> targets,
                   double limit = std::numeric_limits<double>::infinity());
  void add_drift(Operator op, std::vector<int> targets);
  void set_param(std::string name, double value);
  void set_native_gates(std::set<std::string> gates) { native_ = std::move(gates); }
  void set_topology(Topology t) { topology_ = t; }

 private:
  int num_qubits_;
  Dims dims_;
  std::vector<Term> drift_;
  std::vector<std::string> labels_;
  std::map<std::string, Control, std::less<>> controls_;
  std::map<std::string, double, std::less<>> params_;
  std::set<std::string> native_;
  Topology topology_ = Topology::Chain;
};

}  // namespace pulsesim
