#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pulsesim/devices.hpp"

namespace pulsesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Operator exchange() {
  return tensor({sigmax(), sigmax()}) + tensor({sigmay(), sigmay()});
}

int coupling_index(const SpinChainModel& model, int a, int b) {
  const int n = model.num_qubits();
  if (a > b) std::swap(a, b);
  if (b - a == 1) return a;
  if (model.chain_params().boundary == Boundary::Closed && n > 2 && a == 0 && b == n - 1) return n - 1;
  throw std::logic_error("two-qubit gate on uncoupled qubits " + std::to_string(a) + ", " + std::to_string(b));
}

}  // namespace

SpinChainModel::SpinChainModel(int num_qubits, SpinChainParams params)
    : HardwareModel(num_qubits, Dims::qubits(num_qubits)), p_(params) {
  if (!(p_.sx > 0) || !(p_.sz > 0) || !(p_.sxsy > 0)) throw std::invalid_argument("spin chain strengths must be positive");
  set_param("sx", p_.sx);
  set_param("sz", p_.sz);
  set_param("sxsy", p_.sxsy);
  set_native_gates(native_sets::spin_chain());
  const bool ring = p_.boundary == Boundary::Closed && num_qubits > 2;
  set_topology(ring ? Topology::Ring : Topology::Chain);
  for (int j = 0; j < num_qubits; ++j) add_control("sx" + std::to_string(j), sigmax() * kTwoPi, {j}, p_.sx);
  for (int j = 0; j < num_qubits; ++j) add_control("sz" + std::to_string(j), sigmaz() * kTwoPi, {j}, p_.sz);
  for (int j = 0; j + 1 < num_qubits; ++j) add_control("g" + std::to_string(j), exchange() * kTwoPi, {j, j + 1}, p_.sxsy);
  if (ring)
    add_control("g" + std::to_string(num_qubits - 1), exchange() * kTwoPi, {num_qubits - 1, 0}, p_.sxsy);
}

std::unique_ptr<GateCompiler> SpinChainModel::make_compiler() const {
  return std::make_unique<SpinChainCompiler>(*this);
}

GateSegment SpinChainCompiler::compile_gate(const Gate& g) const {
  const SpinChainParams& p = model_->chain_params();
  GateSegment seg;
  auto rotation = [&](const std::string& prefix, double strength) {
    const double theta = wrap_angle(*g.arg);
    if (theta == 0.0) return;
    seg.duration = std::abs(theta) / (2.0 * kTwoPi * strength);
    seg.pulses.emplace_back(prefix + std::to_string(g.targets[0]),
                            ControlCoefficient::constant(std::copysign(strength, theta), 0.0, seg.duration));
  };
  if (g.name == "RX") {
    rotation("sx", p.sx);
  } else if (g.name == "RZ") {
    rotation("sz", p.sz);
  } else if (g.name == "ISWAP") {
    const int k = coupling_index(*model_, g.targets[0], g.targets[1]);
    seg.duration = 1.0 / (8.0 * p.sxsy);
    seg.pulses.emplace_back("g" + std::to_string(k), ControlCoefficient::constant(-p.sxsy, 0.0, seg.duration));
  } else {
    throw std::invalid_argument("spin chain compiler has no rule for " + g.name);
  }
  return seg;
}

HamiltonianProgram compile_spinchain(const QubitCircuit& circ, const SpinChainModel& model,
                                     const CompileOptions& options) {
  return compile_circuit(circ, model, SpinChainCompiler(model), options);
}

}  // namespace pulsesim
