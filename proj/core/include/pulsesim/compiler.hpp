#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pulsesim/model.hpp"
#include "pulsesim/scheduler.hpp"

namespace pulsesim {

/// Pulses realising one gate, with times relative to the gate start.
struct GateSegment {
  std::vector<std::pair<std::string, ControlCoefficient>> pulses;
  double duration = 0.0;
  /// Shared channels the gate occupies besides its qubits.
  std::vector<int> resources;
};

/// Maps native gates to control coefficients.
class GateCompiler {
 public:
  virtual ~GateCompiler() = default;
  virtual GateSegment compile_gate(const Gate& g) const = 0;
};

struct CompileOptions {
  ScheduleMode mode = ScheduleMode::ASAP;
  bool allow_permutation = false;
};

/// Pads the circuit to the model's qubit count, routes two-qubit gates for
/// the model topology, then decomposes into the native set.
QubitCircuit prepare_circuit(const QubitCircuit& circ, const HardwareModel& model);

/// Routing, decomposition, per-gate coefficients and scheduling. Step
/// segments are merged into one pulse per control label; cubic segments stay
/// separate pulses.
HamiltonianProgram compile_circuit(const QubitCircuit& circ, const HardwareModel& model, const GateCompiler& compiler,
                                   const CompileOptions& options = {});

/// Uses model.make_compiler().
HamiltonianProgram compile_circuit(const QubitCircuit& circ, const HardwareModel& model,
                                   const CompileOptions& options = {});

/// Angle folded into (-pi, pi]; differs from the input by a multiple of 2 pi.
double wrap_angle(double theta);

/// Basis indices of the register where subsystems < num_qubits are in 0 or 1
/// and all others in 0, in qubit binary order.
std::vector<long> qubit_subspace_indices(const Dims& dims, int num_qubits);

/// Block of a full-register operator on the qubit subspace.
Matrix restrict_to_qubits(const Matrix& op, const Dims& dims, int num_qubits);

/// Qubit-register state embedded in the full register.
QuantumState embed_qubit_state(const QuantumState& s, const Dims& dims, int num_qubits);

/// Qubit-subspace block of a full-register state (not renormalized).
QuantumState restrict_state_to_qubits(const QuantumState& s, int num_qubits);

/// Program with the model drift and no pulses.
HamiltonianProgram empty_program(const HardwareModel& model);

}  // namespace pulsesim
