#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pulsesim/compiler.hpp"
#include "pulsesim/devices.hpp"
#include "pulsesim/noise.hpp"
#include "pulsesim/solvers.hpp"

namespace pulsesim {

enum class SolverKind { Auto, Sesolve, Mesolve, Mcsolve };
enum class Interpolation { Step, Cubic };

/// Owns a model, the compiled program and noise; runs solvers on request.
class Processor {
 public:
  explicit Processor(std::shared_ptr<const HardwareModel> model, std::optional<double> t1 = std::nullopt,
                     std::optional<double> t2 = std::nullopt, Interpolation interp = Interpolation::Step);
  Processor(std::shared_ptr<const HardwareModel> model, DecoherenceSpec decoherence,
            Interpolation interp = Interpolation::Step);

  const HardwareModel& model() const { return *model_; }
  int num_qubits() const { return model_->num_qubits(); }
  const Dims& dims() const { return model_->dims(); }

  const std::vector<std::string>& control_labels() const { return model_->control_labels(); }
  const Control& get_control(const std::string& label) const { return model_->get_control(label); }

  /// Routing, decomposition, compilation and scheduling with the model's compiler.
  const HamiltonianProgram& load_circuit(const QubitCircuit& circ, const CompileOptions& options = {});
  /// Same with an explicit compiler.
  const HamiltonianProgram& load_circuit(const QubitCircuit& circ, const GateCompiler& compiler,
                                         const CompileOptions& options = {});
  /// Replaces the program with pulses given as label -> (tlist, coeff), using
  /// the processor's interpolation kind.
  const HamiltonianProgram& set_coefficients(
      const std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>& coeffs);
  void set_program(HamiltonianProgram program);
  bool has_program() const { return program_.has_value(); }
  const HamiltonianProgram& program() const;
  void clear_program() { program_.reset(); }

  /// Returns the model's index in the noise list.
  std::size_t add_noise(std::shared_ptr<const NoiseModel> noise);
  void remove_noise(std::size_t index);
  void clear_noise() { noise_.clear(); }
  const std::vector<std::shared_ptr<const NoiseModel>>& noise_models() const { return noise_; }
  bool has_noise() const;

  /// Program with constructor decoherence and every noise model applied.
  HamiltonianProgram noisy_program() const;
  OpenSystem system(bool with_noise = true) const;

  /// Kets on the qubit register are embedded into the full register. Auto
  /// picks sesolve for a noiseless ket run and mesolve otherwise.
  SolverResult run_state(const QuantumState& init, SolverKind solver = SolverKind::Auto,
                         std::vector<double> tlist = {}, const std::vector<Operator>& e_ops = {},
                         const SolverOptions& options = {}) const;

  /// Noiseless propagator restricted to the qubit subspace.
  Matrix qubit_propagator(const SolverOptions& options = {}) const;

  std::string export_pulses() const;

 private:
  std::shared_ptr<const HardwareModel> model_;
  std::optional<HamiltonianProgram> program_;
  std::shared_ptr<const DecoherenceNoise> decoherence_;
  std::vector<std::shared_ptr<const NoiseModel>> noise_;
  Interpolation interp_;
};

/// Open chain with the default parameters except sx.
Processor linear_spin_chain(int num_qubits, std::optional<double> t1 = std::nullopt,
                            std::optional<double> t2 = std::nullopt, SpinChainParams params = {});
Processor circular_spin_chain(int num_qubits, std::optional<double> t1 = std::nullopt,
                              std::optional<double> t2 = std::nullopt, SpinChainParams params = {});

/// Noiseless fidelity between the compiled circuit and its gate-level
/// unitary on the qubit subspace.
double compiled_unitary_fidelity(const QubitCircuit& circ, const HardwareModel& model,
                                 const SolverOptions& options = {});

}  // namespace pulsesim
