#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pulsesim/devices.hpp"

namespace pulsesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix qubit_projected(const Matrix& m2, int levels) {
  Matrix m = Matrix::Zero(levels, levels);
  m.topLeftCorner(2, 2) = m2;
  return m;
}

/// Cubic Gaussian of duration T whose spline integral is exactly `area`.
ControlCoefficient gaussian_pulse(double area, double duration, int samples) {
  std::vector<double> t(static_cast<std::size_t>(samples));
  std::vector<double> c(t.size());
  for (int k = 0; k < samples; ++k) {
    t[k] = duration * k / (samples - 1);
    c[k] = gaussian_envelope(t[k], duration);
  }
  c.front() = 0.0;
  c.back() = 0.0;
  const ControlCoefficient unit = ControlCoefficient::cubic(t, c);
  return unit.scaled(area / unit.integral());
}

/// Peak of a unit-area pulse of duration 1; peaks scale as 1 / T.
double unit_peak(int samples) { return gaussian_pulse(1.0, 1.0, samples).max_abs(); }

}  // namespace

double gaussian_envelope(double t, double duration) {
  if (!(t >= 0.0) || !(t <= duration) || !(duration > 0)) return 0.0;
  const double sigma = duration / 4.0;
  const double x = (t - duration / 2.0) / sigma;
  const double pedestal = std::exp(-2.0);
  const double area = sigma * (std::sqrt(2.0 * std::numbers::pi) * std::erf(std::numbers::sqrt2) - 4.0 * pedestal);
  return (std::exp(-x * x / 2.0) - pedestal) / area;
}

SCQubitsModel::SCQubitsModel(int num_qubits, SCQubitsParams params)
    : HardwareModel(num_qubits, Dims(std::vector<int>(static_cast<std::size_t>(num_qubits), params.levels))),
      p_(params) {
  if (p_.levels < 2) throw std::invalid_argument("transmon needs at least two levels");
  if (!(p_.omega_max > 0) || !(p_.cr_strength > 0) || !(p_.gate_time > 0))
    throw std::invalid_argument("drive strengths and gate time must be positive");
  if (p_.samples < 5) throw std::invalid_argument("need at least five pulse samples");
  set_param("alpha", p_.alpha);
  set_param("omega_max", p_.omega_max);
  set_param("cr_strength", p_.cr_strength);
  set_param("gate_time", p_.gate_time);
  set_param("zz_crosstalk", p_.zz_crosstalk);
  set_native_gates(native_sets::superconducting());
  set_topology(Topology::Chain);

  const int d = p_.levels;
  const Operator a = destroy(d);
  const Operator ad = a.dag();
  const Operator z(qubit_projected(sigmaz().matrix(), d));
  const Operator x(qubit_projected(sigmax().matrix(), d));
  for (int j = 0; j < num_qubits; ++j) {
    if (p_.alpha != 0.0) add_drift(ad * ad * a * a * (kTwoPi * p_.alpha / 2.0), {j});
    add_control("sx" + std::to_string(j), (ad + a) * kTwoPi, {j}, p_.omega_max);
    add_control("sy" + std::to_string(j), (ad - a) * cplx(0.0, kTwoPi), {j}, p_.omega_max);
  }
  for (int j = 0; j + 1 < num_qubits; ++j) {
    add_control("cr1" + std::to_string(j), tensor({z, x}) * kTwoPi, {j, j + 1}, p_.cr_strength);
    add_control("cr2" + std::to_string(j), tensor({x, z}) * kTwoPi, {j, j + 1}, p_.cr_strength);
    if (p_.zz_crosstalk != 0.0) add_drift(tensor({ad * a, ad * a}) * (kTwoPi * p_.zz_crosstalk), {j, j + 1});
  }
}

std::unique_ptr<GateCompiler> SCQubitsModel::make_compiler() const { return std::make_unique<SCQubitsCompiler>(*this); }

GateSegment SCQubitsCompiler::single(const std::string& label, double theta, double t0) const {
  const SCQubitsParams& p = model_->sc_params();
  // Rotation angle on the qubit levels is 4 pi times the coefficient area.
  const double area = theta / (2.0 * kTwoPi);
  double duration = p.gate_time;
  const double peak = std::abs(area) * unit_peak(p.samples) / duration;
  if (peak > p.omega_max) duration *= peak / p.omega_max;
  GateSegment seg;
  seg.duration = duration;
  seg.pulses.emplace_back(label, gaussian_pulse(area, duration, p.samples).shifted(t0));
  return seg;
}

GateSegment SCQubitsCompiler::compile_gate(const Gate& g) const {
  const SCQubitsParams& p = model_->sc_params();
  if (g.name == "RX" || g.name == "RY") {
    const std::string label = (g.name == "RX" ? "sx" : "sy") + std::to_string(g.targets[0]);
    return single(label, wrap_angle(*g.arg), 0.0);
  }
  if (g.name != "CNOT") throw std::invalid_argument("superconducting compiler has no rule for " + g.name);

  const int c = g.controls[0];
  const int t = g.targets[0];
  if (std::abs(c - t) != 1) throw std::logic_error("CNOT on uncoupled qubits");
  // CNOT = e^{i pi/4} RZ_c(pi/2) RX_t(pi/2) exp(i pi/4 Z_c X_t).
  const std::string cr = c < t ? "cr1" + std::to_string(c) : "cr2" + std::to_string(t);
  const double cr_area = -1.0 / 8.0;
  const double t_cr = std::abs(cr_area) * unit_peak(p.samples) / p.cr_strength;
  GateSegment seg;
  seg.pulses.emplace_back(cr, gaussian_pulse(cr_area, t_cr, p.samples));

  const double half = std::numbers::pi / 2.0;
  double t_end = t_cr;
  auto append = [&](const std::string& label, double theta, double t0) {
    GateSegment s = single(label, theta, t0);
    for (auto& pl : s.pulses) seg.pulses.push_back(std::move(pl));
    t_end = std::max(t_end, t0 + s.duration);
    return t0 + s.duration;
  };
  append("sx" + std::to_string(t), half, t_cr);
  // RZ(pi/2) = RX(pi/2) RY(pi/2) RX(-pi/2), applied right to left.
  double tc = append("sx" + std::to_string(c), -half, t_cr);
  tc = append("sy" + std::to_string(c), half, tc);
  append("sx" + std::to_string(c), half, tc);
  seg.duration = t_end;
  return seg;
}

HamiltonianProgram compile_scqubits(const QubitCircuit& circ, const SCQubitsModel& model,
                                    const CompileOptions& options) {
  return compile_circuit(circ, model, SCQubitsCompiler(model), options);
}

}  // namespace pulsesim
