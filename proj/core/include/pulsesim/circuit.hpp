#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pulsesim/qobj.hpp"

namespace pulsesim {

/// One gate application. Built-in names: X Y Z H S T SDG TDG ID, RX RY RZ
/// PHASE (angle arg), CNOT CZ (one control), TOFFOLI (two controls), SWAP
/// ISWAP (two targets) and GLOBALPHASE (no qubits, phase arg). Rotations
/// follow RX(theta) = exp(-i theta X / 2).
struct Gate {
  std::string name;
  std::vector<int> targets;
  std::vector<int> controls;
  std::optional<double> arg;

  /// Controls followed by targets; the order used by the local matrix.
  std::vector<int> qubits() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

namespace gates {
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate h(int q);
Gate s(int q);
Gate t(int q);
Gate rx(int q, double theta);
Gate ry(int q, double theta);
Gate rz(int q, double theta);
Gate cnot(int control, int target);
Gate cz(int control, int target);
Gate swap(int a, int b);
Gate iswap(int a, int b);
Gate toffoli(int c1, int c2, int target);
Gate globalphase(double phase);
}  // namespace gates

/// User-registered gate: local unitary as a function of the optional arg.
struct CustomGate {
  int num_targets = 1;
  std::function<Matrix(std::optional<double>)> matrix;
};
using CustomGateTable = std::map<std::string, CustomGate, std::less<>>;

struct GateArity {
  int targets;
  int controls;
  bool needs_arg;
};

/// Arity of a built-in gate name; nullopt for unknown names.
std::optional<GateArity> builtin_arity(std::string_view name);

class QubitCircuit {
 public:
  explicit QubitCircuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const CustomGateTable& custom_gates() const { return *custom_; }
  bool empty() const { return gates_.empty(); }

  /// Validates arity and qubit indices, then appends.
  QubitCircuit& add_gate(Gate g);
  QubitCircuit& add_gates(const std::vector<Gate>& gs);

  void register_gate(std::string name, CustomGate def);

  /// Same qubit count and custom gates, no gates.
  QubitCircuit empty_copy() const;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  std::shared_ptr<CustomGateTable> custom_;
};

/// Local unitary of `g` on g.qubits() (controls first).
Matrix gate_matrix(const Gate& g, const CustomGateTable& custom = {});

/// Full-register unitary of `g` on `num_qubits` qubits.
Operator gate_unitary(const Gate& g, int num_qubits, const CustomGateTable& custom = {});

QuantumState run_gate_level(const QubitCircuit& circ, const QuantumState& psi0);

Operator circuit_unitary(const QubitCircuit& circ);

// ---- compilation passes

namespace native_sets {
/// RX, RZ, ISWAP.
std::set<std::string> spin_chain();
/// RX, RY, CNOT (CNOT realised by cross resonance).
std::set<std::string> superconducting();
/// RX, RY, ISWAP (ISWAP realised through the resonator).
std::set<std::string> cavity_qed();
/// RX, RY only.
std::set<std::string> single_qubit_xy();
}  // namespace native_sets

/// Rewrites every gate into `native` gate names; GLOBALPHASE gates record the
/// phase so the result equals the input unitary exactly.
QubitCircuit decompose_to_native(const QubitCircuit& circ, const std::set<std::string>& native);

/// Routes two-qubit gates onto a 1-D chain by surrounding them with SWAPs.
/// With `ring`, qubits 0 and n-1 are also adjacent. Gates acting on three
/// qubits are expanded first. With `iswap_moves`, a one-hop move of a qubit
/// that is only a control of the displaced gate uses ISWAP in place of both
/// SWAPs, followed by Z on the two swapped positions.
QubitCircuit insert_chain_swaps(const QubitCircuit& circ, bool ring = false, bool iswap_moves = false);

/// Gate-level QFT on n qubits built from H, controlled phases (as CNOT + RZ)
/// and a final qubit reversal with SWAPs.
QubitCircuit qft_circuit(int n);

/// The three-qubit Deutsch-Jozsa example with a balanced oracle.
QubitCircuit deutsch_jozsa_circuit();

}  // namespace pulsesim
