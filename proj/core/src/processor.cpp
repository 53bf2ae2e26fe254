#include "pulsesim/processor.hpp"

#include <stdexcept>

namespace pulsesim {

Processor::Processor(std::shared_ptr<const HardwareModel> model, std::optional<double> t1, std::optional<double> t2,
                     Interpolation interp)
    : Processor(model, DecoherenceSpec::uniform(model ? model->num_qubits() : 0, t1, t2), interp) {}

Processor::Processor(std::shared_ptr<const HardwareModel> model, DecoherenceSpec decoherence, Interpolation interp)
    : model_(std::move(model)), interp_(interp) {
  if (!model_) throw std::invalid_argument("processor needs a model");
  if (static_cast<int>(decoherence.t1.size()) > model_->num_qubits() ||
      static_cast<int>(decoherence.t2.size()) > model_->num_qubits())
    throw std::invalid_argument("more coherence times than qubits");
  relaxation_ops(decoherence.t1, model_->dims());
  dephasing_ops(decoherence.t1, decoherence.t2, model_->dims());
  if (!decoherence.empty()) decoherence_ = std::make_shared<DecoherenceNoise>(std::move(decoherence));
}

const HamiltonianProgram& Processor::load_circuit(const QubitCircuit& circ, const CompileOptions& options) {
  program_ = compile_circuit(circ, *model_, options);
  return *program_;
}

const HamiltonianProgram& Processor::load_circuit(const QubitCircuit& circ, const GateCompiler& compiler,
                                                  const CompileOptions& options) {
  program_ = compile_circuit(circ, *model_, compiler, options);
  return *program_;
}

const HamiltonianProgram& Processor::set_coefficients(
    const std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>& coeffs) {
  HamiltonianProgram p = empty_program(*model_);
  for (const std::string& label : model_->control_labels()) {
    auto it = coeffs.find(label);
    if (it == coeffs.end()) continue;
    const auto& [t, c] = it->second;
    ControlCoefficient cc = interp_ == Interpolation::Step ? ControlCoefficient::step(t, c) : ControlCoefficient::cubic(t, c);
    p.total_time = std::max(p.total_time, cc.end());
    const Control& ctl = model_->get_control(label);
    p.pulses.emplace_back(ctl.op, ctl.targets, std::move(cc), label);
  }
  for (const auto& [label, v] : coeffs) model_->get_control(label);
  program_ = std::move(p);
  return *program_;
}

void Processor::set_program(HamiltonianProgram program) {
  if (program.dims != model_->dims()) throw std::invalid_argument("program dims do not match the model");
  program_ = std::move(program);
}

const HamiltonianProgram& Processor::program() const {
  if (!program_) throw std::logic_error("no circuit loaded");
  return *program_;
}

std::size_t Processor::add_noise(std::shared_ptr<const NoiseModel> noise) {
  if (!noise) throw std::invalid_argument("null noise model");
  noise_.push_back(std::move(noise));
  return noise_.size() - 1;
}

void Processor::remove_noise(std::size_t index) {
  if (index >= noise_.size()) throw std::out_of_range("noise index out of range");
  noise_.erase(noise_.begin() + static_cast<std::ptrdiff_t>(index));
}

bool Processor::has_noise() const { return decoherence_ || !noise_.empty(); }

HamiltonianProgram Processor::noisy_program() const {
  std::vector<std::shared_ptr<const NoiseModel>> all;
  if (decoherence_) all.push_back(decoherence_);
  all.insert(all.end(), noise_.begin(), noise_.end());
  return apply_noise_models(program(), all, model_->num_qubits());
}

OpenSystem Processor::system(bool with_noise) const {
  return with_noise ? assemble(noisy_program(), true) : assemble(program(), false);
}

SolverResult Processor::run_state(const QuantumState& init, SolverKind solver, std::vector<double> tlist,
                                  const std::vector<Operator>& e_ops, const SolverOptions& options) const {
  const QuantumState psi0 = embed_qubit_state(init, model_->dims(), model_->num_qubits());
  const OpenSystem sys = system(true);
  const bool noiseless = sys.c_ops.empty();
  if (solver == SolverKind::Auto) solver = (noiseless && psi0.is_ket()) ? SolverKind::Sesolve : SolverKind::Mesolve;
  switch (solver) {
    case SolverKind::Sesolve:
      if (!noiseless) throw std::invalid_argument("sesolve cannot include collapse operators");
      return sesolve(sys, psi0, std::move(tlist), e_ops, options);
    case SolverKind::Mcsolve:
      return mcsolve(sys, psi0, std::move(tlist), e_ops, options);
    default:
      return mesolve(sys, psi0, std::move(tlist), e_ops, options);
  }
}

Matrix Processor::qubit_propagator(const SolverOptions& options) const {
  const OpenSystem sys = system(false);
  const auto idx = qubit_subspace_indices(model_->dims(), model_->num_qubits());
  const long d = model_->dims().total();
  const auto m = static_cast<Eigen::Index>(idx.size());
  Matrix cols = Matrix::Zero(d, m);
  for (Eigen::Index j = 0; j < m; ++j) cols(idx[j], j) = 1.0;
  const Matrix u = propagate_unitary(sys, cols, 0.0, sys.total_time, options);
  Matrix block(m, m);
  for (Eigen::Index i = 0; i < m; ++i) block.row(i) = u.row(idx[i]);
  return block;
}

std::string Processor::export_pulses() const { return pulses_to_json(program()); }

Processor linear_spin_chain(int num_qubits, std::optional<double> t1, std::optional<double> t2,
                            SpinChainParams params) {
  params.boundary = Boundary::Open;
  return Processor(std::make_shared<SpinChainModel>(num_qubits, params), t1, t2);
}

Processor circular_spin_chain(int num_qubits, std::optional<double> t1, std::optional<double> t2,
                              SpinChainParams params) {
  params.boundary = Boundary::Closed;
  return Processor(std::make_shared<SpinChainModel>(num_qubits, params), t1, t2);
}

double compiled_unitary_fidelity(const QubitCircuit& circ, const HardwareModel& model, const SolverOptions& options) {
  std::shared_ptr<const HardwareModel> alias(&model, [](const HardwareModel*) {});
  Processor proc(alias);
  proc.load_circuit(circ);
  QubitCircuit padded(model.num_qubits());
  for (const auto& [name, def] : circ.custom_gates()) padded.register_gate(name, def);
  padded.add_gates(circ.gates());
  return unitary_fidelity(circuit_unitary(padded).matrix(), proc.qubit_propagator(options));
}

}  // namespace pulsesim
