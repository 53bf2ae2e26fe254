#include "pulsesim/compiler.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace pulsesim {

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

std::vector<long> qubit_subspace_indices(const Dims& dims, int num_qubits) {
  const int n = dims.num_subsystems();
  if (num_qubits > n) throw std::invalid_argument("more qubits than subsystems");
  for (int j = 0; j < num_qubits; ++j)
    if (dims[j] < 2) throw std::invalid_argument("qubit subsystem needs at least two levels");
  std::vector<long> out;
  const long count = 1L << num_qubits;
  out.reserve(static_cast<std::size_t>(count));
  for (long b = 0; b < count; ++b) {
    long idx = 0;
    for (int j = 0; j < n; ++j) {
      const long level = j < num_qubits ? (b >> (num_qubits - 1 - j)) & 1 : 0;
      idx = idx * dims[j] + level;
    }
    out.push_back(idx);
  }
  return out;
}

Matrix restrict_to_qubits(const Matrix& op, const Dims& dims, int num_qubits) {
  if (op.rows() != dims.total() || op.cols() != dims.total()) throw std::invalid_argument("operator does not match dims");
  const auto idx = qubit_subspace_indices(dims, num_qubits);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Matrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = op(idx[i], idx[j]);
  return out;
}

QuantumState embed_qubit_state(const QuantumState& s, const Dims& dims, int num_qubits) {
  if (s.dims() == dims) return s;
  if (s.dim() != (1L << num_qubits)) throw std::invalid_argument("state is neither full-register nor qubit-register");
  const auto idx = qubit_subspace_indices(dims, num_qubits);
  const long d = dims.total();
  if (s.is_ket()) {
    Vector v = Vector::Zero(d);
    for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = s.data()(static_cast<Eigen::Index>(i), 0);
    return QuantumState::ket(std::move(v), dims);
  }
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      rho(idx[i], idx[j]) = s.data()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return QuantumState::density(std::move(rho), dims);
}

QuantumState restrict_state_to_qubits(const QuantumState& s, int num_qubits) {
  const auto idx = qubit_subspace_indices(s.dims(), num_qubits);
  const auto m = static_cast<Eigen::Index>(idx.size());
  const Dims q = Dims::qubits(num_qubits);
  if (s.is_ket()) {
    Vector v(m);
    for (Eigen::Index i = 0; i < m; ++i) v(i) = s.data()(idx[i], 0);
    return QuantumState::ket(std::move(v), q);
  }
  Matrix rho(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) rho(i, j) = s.data()(idx[i], idx[j]);
  return QuantumState::density(std::move(rho), q);
}

HamiltonianProgram empty_program(const HardwareModel& model) {
  HamiltonianProgram p;
  p.dims = model.dims();
  p.drift = model.drift();
  return p;
}

QubitCircuit prepare_circuit(const QubitCircuit& circ, const HardwareModel& model) {
  if (circ.num_qubits() > model.num_qubits())
    throw std::invalid_argument("circuit has more qubits than the model");
  QubitCircuit padded(model.num_qubits());
  for (const auto& [name, def] : circ.custom_gates()) padded.register_gate(name, def);
  padded.add_gates(circ.gates());

  QubitCircuit routed = padded;
  if (model.topology() != Topology::AllToAll) {
    routed = insert_chain_swaps(padded, model.topology() == Topology::Ring, model.native_gates().count("ISWAP") > 0);
  }
  return decompose_to_native(routed, model.native_gates());
}

HamiltonianProgram compile_circuit(const QubitCircuit& circ, const HardwareModel& model, const GateCompiler& compiler,
                                   const CompileOptions& options) {
  const QubitCircuit native = prepare_circuit(circ, model);

  std::vector<GateSegment> segments;
  std::vector<Instruction> instrs;
  for (const Gate& g : native.gates()) {
    if (g.name == "GLOBALPHASE") continue;
    GateSegment seg = compiler.compile_gate(g);
    instrs.push_back({g, seg.duration, seg.resources});
    segments.push_back(std::move(seg));
  }
  const ScheduleResult sched =
      schedule_instructions(instrs, options.mode, options.allow_permutation, native.custom_gates());

  HamiltonianProgram prog = empty_program(model);
  prog.total_time = sched.makespan;

  std::map<std::string, std::vector<ControlCoefficient>> steps;
  std::map<std::string, std::vector<ControlCoefficient>> cubics;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (const auto& [label, coeff] : segments[i].pulses) {
      model.get_control(label);
      if (coeff.empty()) continue;
      ControlCoefficient c = coeff.shifted(sched.start_times[i]);
      (c.kind() == ControlCoefficient::Kind::Step ? steps : cubics)[label].push_back(std::move(c));
    }
  }
  for (const std::string& label : model.control_labels()) {
    const Control& ctl = model.get_control(label);
    if (auto it = steps.find(label); it != steps.end()) {
      ControlCoefficient merged = merge_steps(it->second);
      if (!merged.empty()) prog.pulses.emplace_back(ctl.op, ctl.targets, std::move(merged), label);
    }
    if (auto it = cubics.find(label); it != cubics.end())
      for (auto& c : it->second) prog.pulses.emplace_back(ctl.op, ctl.targets, std::move(c), label);
  }
  return prog;
}

HamiltonianProgram compile_circuit(const QubitCircuit& circ, const HardwareModel& model,
                                   const CompileOptions& options) {
  const auto compiler = model.make_compiler();
  return compile_circuit(circ, model, *compiler, options);
}

}  // namespace pulsesim
