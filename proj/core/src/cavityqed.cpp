#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pulsesim/devices.hpp"

namespace pulsesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Dims cavity_dims(int n, int levels) {
  std::vector<int> d(static_cast<std::size_t>(n), 2);
  d.push_back(levels);
  return Dims(d);
}

/// Energy of the bright single-excitation state, dispersively shifted.
double bright_energy(double delta, double g) {
  const double dw = kTwoPi * delta;
  const double gg = kTwoPi * g;
  return dw / 2.0 * (1.0 - std::sqrt(1.0 + 8.0 * gg * gg / (dw * dw)));
}

/// Flat top of height 1 with sin^2 edges of length `ramp`.
double flat_top(double t, double duration, double ramp) {
  if (t < 0.0 || t > duration) return 0.0;
  const double edge = std::min(t, duration - t);
  if (edge >= ramp) return 1.0;
  const double s = std::sin(std::numbers::pi * edge / (2.0 * ramp));
  return s * s;
}

}  // namespace

CavityQEDModel::CavityQEDModel(int num_qubits, CavityQEDParams params)
    : HardwareModel(num_qubits, cavity_dims(num_qubits, params.levels)), p_(params) {
  if (p_.levels < 2) throw std::invalid_argument("resonator needs at least two levels");
  if (p_.delta == 0.0) throw std::invalid_argument("resonator detuning must be nonzero");
  if (!(p_.g > 0) || !(p_.sx > 0) || !(p_.sy > 0) || !(p_.ramp > 0))
    throw std::invalid_argument("cavity strengths and ramp must be positive");
  if (p_.samples < 5) throw std::invalid_argument("need at least five pulse samples");
  set_param("delta", p_.delta);
  set_param("g", p_.g);
  set_param("sx", p_.sx);
  set_param("sy", p_.sy);
  set_param("ramp", p_.ramp);
  set_native_gates(native_sets::cavity_qed());
  set_topology(Topology::AllToAll);

  const int r = num_qubits;
  add_drift(num(p_.levels) * (kTwoPi * p_.delta), {r});
  for (int j = 0; j < num_qubits; ++j) add_control("sx" + std::to_string(j), sigmax() * kTwoPi, {j}, p_.sx);
  for (int j = 0; j < num_qubits; ++j) add_control("sy" + std::to_string(j), sigmay() * kTwoPi, {j}, p_.sy);
  const Operator tc = tensor({sigmam(), create(p_.levels)}) + tensor({sigmap(), destroy(p_.levels)});
  for (int j = 0; j < num_qubits; ++j) add_control("g" + std::to_string(j), tc * kTwoPi, {j, r}, p_.g);
}

std::unique_ptr<GateCompiler> CavityQEDModel::make_compiler() const {
  return std::make_unique<CavityQEDCompiler>(*this);
}

GateSegment CavityQEDCompiler::compile_gate(const Gate& g) const {
  const CavityQEDParams& p = model_->cavity_params();
  GateSegment seg;
  auto square = [&](const std::string& label, double theta, double strength, double t0) {
    theta = wrap_angle(theta);
    if (theta == 0.0) return t0;
    const double dt = std::abs(theta) / (2.0 * kTwoPi * strength);
    seg.pulses.emplace_back(label, ControlCoefficient::constant(std::copysign(strength, theta), t0, t0 + dt));
    seg.duration = std::max(seg.duration, t0 + dt);
    return t0 + dt;
  };
  if (g.name == "RX") {
    square("sx" + std::to_string(g.targets[0]), *g.arg, p.sx, 0.0);
    return seg;
  }
  if (g.name == "RY") {
    square("sy" + std::to_string(g.targets[0]), *g.arg, p.sy, 0.0);
    return seg;
  }
  if (g.name != "ISWAP") throw std::invalid_argument("cavity compiler has no rule for " + g.name);

  // Both couplings on together: the bright state picks up a phase pi, which
  // gives (S x S) ISWAP; the S gates are undone below.
  const double eb_max = std::abs(bright_energy(p.delta, p.g));
  const int n_ramp = 2000;
  double ramp_phase = 0.0;
  for (int k = 0; k <= n_ramp; ++k) {
    const double t = p.ramp * k / n_ramp;
    const double w = (k == 0 || k == n_ramp) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    ramp_phase += w * std::abs(bright_energy(p.delta, p.g * flat_top(t, 2.0 * p.ramp + 1.0, p.ramp)));
  }
  ramp_phase *= p.ramp / (3.0 * n_ramp);
  const double plateau = (std::numbers::pi - 2.0 * ramp_phase) / eb_max;
  if (plateau < 0) throw std::invalid_argument("cavity ramp too long for the coupling strength");
  const double t_c = 2.0 * p.ramp + plateau;

  std::vector<double> ts(static_cast<std::size_t>(p.samples));
  std::vector<double> cs(ts.size());
  for (int k = 0; k < p.samples; ++k) {
    ts[k] = t_c * k / (p.samples - 1);
    cs[k] = p.g * flat_top(ts[k], t_c, p.ramp);
  }
  cs.front() = 0.0;
  cs.back() = 0.0;
  const ControlCoefficient coupling = ControlCoefficient::cubic(ts, cs);
  for (int q : g.targets) seg.pulses.emplace_back("g" + std::to_string(q), coupling);
  seg.duration = t_c;
  seg.resources = {0};

  // SDG = RZ(-pi/2) = RX(pi/2) RY(-pi/2) RX(-pi/2), applied right to left.
  const double half = std::numbers::pi / 2.0;
  for (int q : g.targets) {
    const std::string sq = std::to_string(q);
    double t0 = square("sx" + sq, -half, p.sx, t_c);
    t0 = square("sy" + sq, -half, p.sy, t0);
    square("sx" + sq, half, p.sx, t0);
  }
  return seg;
}

HamiltonianProgram compile_cavityqed(const QubitCircuit& circ, const CavityQEDModel& model,
                                     const CompileOptions& options) {
  return compile_circuit(circ, model, CavityQEDCompiler(model), options);
}

}  // namespace pulsesim
