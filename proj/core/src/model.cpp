#include "pulsesim/model.hpp"

#include <stdexcept>

#include "pulsesim/compiler.hpp"

namespace pulsesim {

HardwareModel::HardwareModel(int num_qubits, Dims dims) : num_qubits_(num_qubits), dims_(std::move(dims)) {
  if (num_qubits < 1) throw std::invalid_argument("model needs at least one qubit");
  if (dims_.num_subsystems() < num_qubits) throw std::invalid_argument("model dims shorter than the qubit count");
}

bool HardwareModel::has_control(std::string_view label) const { return controls_.find(label) != controls_.end(); }

const Control& HardwareModel::get_control(std::string_view label) const {
  auto it = controls_.find(label);
  if (it == controls_.end()) throw std::out_of_range("unknown control label: " + std::string(label));
  return it->second;
}

double HardwareModel::param(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("unknown model parameter: " + std::string(name));
  return it->second;
}

std::unique_ptr<GateCompiler> HardwareModel::make_compiler() const {
  throw std::logic_error("this model has no gate compiler");
}

void HardwareModel::add_control(std::string label, Operator op, std::vector<int> targets, double limit) {
  if (has_control(label)) throw std::invalid_argument("duplicate control label: " + label);
  for (int t : targets)
    if (t < 0 || t >= dims_.num_subsystems()) throw std::out_of_range("control target out of range");
  if (op.dim() != dims_.select(targets).total()) throw std::invalid_argument("control operator does not match target dims");
  labels_.push_back(label);
  controls_.emplace(std::move(label), Control{std::move(op), std::move(targets), limit});
}

void HardwareModel::add_drift(Operator op, std::vector<int> targets) {
  for (int t : targets)
    if (t < 0 || t >= dims_.num_subsystems()) throw std::out_of_range("drift target out of range");
  if (op.dim() != dims_.select(targets).total()) throw std::invalid_argument("drift operator does not match target dims");
  drift_.push_back({std::move(op), std::move(targets), std::nullopt});
}

void HardwareModel::set_param(std::string name, double value) { params_[std::move(name)] = value; }

}  // namespace pulsesim
