#include "pulsesim/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pulsesim/linalg.hpp"

namespace pulsesim {

using std::numbers::pi;

std::vector<int> Gate::qubits() const {
  std::vector<int> q = controls;
  q.insert(q.end(), targets.begin(), targets.end());
  return q;
}

namespace gates {
namespace {
Gate one(std::string name, int q, std::optional<double> arg = std::nullopt) {
  return Gate{std::move(name), {q}, {}, arg};
}
}  // namespace

Gate x(int q) { return one("X", q); }
Gate y(int q) { return one("Y", q); }
Gate z(int q) { return one("Z", q); }
Gate h(int q) { return one("H", q); }
Gate s(int q) { return one("S", q); }
Gate t(int q) { return one("T", q); }
Gate rx(int q, double theta) { return one("RX", q, theta); }
Gate ry(int q, double theta) { return one("RY", q, theta); }
Gate rz(int q, double theta) { return one("RZ", q, theta); }
Gate cnot(int control, int target) { return Gate{"CNOT", {target}, {control}, std::nullopt}; }
Gate cz(int control, int target) { return Gate{"CZ", {target}, {control}, std::nullopt}; }
Gate swap(int a, int b) { return Gate{"SWAP", {a, b}, {}, std::nullopt}; }
Gate iswap(int a, int b) { return Gate{"ISWAP", {a, b}, {}, std::nullopt}; }
Gate toffoli(int c1, int c2, int target) { return Gate{"TOFFOLI", {target}, {c1, c2}, std::nullopt}; }
Gate globalphase(double phase) { return Gate{"GLOBALPHASE", {}, {}, phase}; }
}  // namespace gates

std::optional<GateArity> builtin_arity(std::string_view name) {
  static const std::map<std::string, GateArity, std::less<>> table = {
      {"X", {1, 0, false}},     {"Y", {1, 0, false}},     {"Z", {1, 0, false}},
      {"H", {1, 0, false}},     {"S", {1, 0, false}},     {"T", {1, 0, false}},
      {"SDG", {1, 0, false}},   {"TDG", {1, 0, false}},   {"ID", {1, 0, false}},
      {"RX", {1, 0, true}},     {"RY", {1, 0, true}},     {"RZ", {1, 0, true}},
      {"PHASE", {1, 0, true}},  {"CNOT", {1, 1, false}},  {"CZ", {1, 1, false}},
      {"TOFFOLI", {1, 2, false}}, {"SWAP", {2, 0, false}}, {"ISWAP", {2, 0, false}},
      {"GLOBALPHASE", {0, 0, true}},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- QubitCircuit

QubitCircuit::QubitCircuit(int num_qubits)
    : num_qubits_(num_qubits), custom_(std::make_shared<CustomGateTable>()) {
  if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
}

QubitCircuit& QubitCircuit::add_gate(Gate g) {
  int want_targets = 0;
  int want_controls = 0;
  bool needs_arg = false;
  if (auto a = builtin_arity(g.name)) {
    want_targets = a->targets;
    want_controls = a->controls;
    needs_arg = a->needs_arg;
  } else if (auto it = custom_->find(g.name); it != custom_->end()) {
    want_targets = it->second.num_targets;
  } else {
    throw std::invalid_argument("unknown gate '" + g.name + "'");
  }
  if (static_cast<int>(g.targets.size()) != want_targets || static_cast<int>(g.controls.size()) != want_controls)
    throw std::invalid_argument("gate '" + g.name + "' has the wrong number of qubits");
  if (needs_arg && !g.arg) throw std::invalid_argument("gate '" + g.name + "' needs an argument");
  std::vector<int> all = g.qubits();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] < 0 || all[i] >= num_qubits_)
      throw std::out_of_range("gate '" + g.name + "' acts on qubit " + std::to_string(all[i]) + " outside the circuit");
    for (std::size_t j = 0; j < i; ++j)
      if (all[i] == all[j]) throw std::invalid_argument("gate '" + g.name + "' uses a qubit twice");
  }
  gates_.push_back(std::move(g));
  return *this;
}

QubitCircuit& QubitCircuit::add_gates(const std::vector<Gate>& gs) {
  for (const auto& g : gs) add_gate(g);
  return *this;
}

void QubitCircuit::register_gate(std::string name, CustomGate def) {
  if (builtin_arity(name)) throw std::invalid_argument("cannot redefine built-in gate '" + name + "'");
  if (def.num_targets < 1 || !def.matrix) throw std::invalid_argument("invalid custom gate definition");
  // Copy-on-write: circuits derived from this one keep the old table.
  auto table = std::make_shared<CustomGateTable>(*custom_);
  (*table)[std::move(name)] = std::move(def);
  custom_ = std::move(table);
}

QubitCircuit QubitCircuit::empty_copy() const {
  QubitCircuit c(num_qubits_);
  c.custom_ = custom_;
  return c;
}

// ---------------------------------------------------------------- matrices

namespace {

Matrix m2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix controlled(const Matrix& u, int num_controls) {
  const long n = u.rows() << num_controls;
  Matrix m = Matrix::Identity(n, n);
  m.bottomRightCorner(u.rows(), u.cols()) = u;
  return m;
}

}  // namespace

Matrix gate_matrix(const Gate& g, const CustomGateTable& custom) {
  const double a = g.arg.value_or(0.0);
  const double c = std::cos(a / 2.0);
  const double s = std::sin(a / 2.0);
  const std::string& n = g.name;
  if (n == "X") return m2(0, 1, 1, 0);
  if (n == "Y") return m2(0, -kI, kI, 0);
  if (n == "Z") return m2(1, 0, 0, -1);
  if (n == "H") return m2(1, 1, 1, -1) / std::sqrt(2.0);
  if (n == "S") return m2(1, 0, 0, kI);
  if (n == "SDG") return m2(1, 0, 0, -kI);
  if (n == "T") return m2(1, 0, 0, std::exp(kI * (pi / 4)));
  if (n == "TDG") return m2(1, 0, 0, std::exp(-kI * (pi / 4)));
  if (n == "ID") return Matrix::Identity(2, 2);
  if (n == "RX") return m2(c, -kI * s, -kI * s, c);
  if (n == "RY") return m2(c, -s, s, c);
  if (n == "RZ") return m2(std::exp(-kI * (a / 2)), 0, 0, std::exp(kI * (a / 2)));
  if (n == "PHASE") return m2(1, 0, 0, std::exp(kI * a));
  if (n == "CNOT") return controlled(m2(0, 1, 1, 0), 1);
  if (n == "CZ") return controlled(m2(1, 0, 0, -1), 1);
  if (n == "TOFFOLI") return controlled(m2(0, 1, 1, 0), 2);
  if (n == "SWAP" || n == "ISWAP") {
    Matrix m = Matrix::Zero(4, 4);
    const cplx off = n == "SWAP" ? cplx{1, 0} : kI;
    m(0, 0) = 1;
    m(3, 3) = 1;
    m(1, 2) = off;
    m(2, 1) = off;
    return m;
  }
  if (n == "GLOBALPHASE") return Matrix::Identity(1, 1) * std::exp(kI * a);
  if (auto it = custom.find(n); it != custom.end()) {
    Matrix m = it->second.matrix(g.arg);
    const long want = 1L << it->second.num_targets;
    if (m.rows() != want || m.cols() != want) throw std::invalid_argument("custom gate '" + n + "' has a bad matrix size");
    return m;
  }
  throw std::invalid_argument("no matrix registered for gate '" + n + "'");
}

Operator gate_unitary(const Gate& g, int num_qubits, const CustomGateTable& custom) {
  const Dims dims = Dims::qubits(num_qubits);
  const Matrix local = gate_matrix(g, custom);
  if (g.name == "GLOBALPHASE") return {Matrix::Identity(dims.total(), dims.total()) * local(0, 0), dims};
  const std::vector<int> q = g.qubits();
  return {expand_matrix(local, q, dims), dims};
}

QuantumState run_gate_level(const QubitCircuit& circ, const QuantumState& psi0) {
  const Dims dims = Dims::qubits(circ.num_qubits());
  if (!(psi0.dims() == dims)) throw std::invalid_argument("run_gate_level: state dims do not match the circuit");
  Matrix data = psi0.data();
  for (const Gate& g : circ.gates()) {
    const Matrix u = gate_unitary(g, circ.num_qubits(), circ.custom_gates()).matrix();
    data = psi0.is_ket() ? Matrix(u * data) : Matrix(u * data * u.adjoint());
  }
  return psi0.is_ket() ? QuantumState::ket(data.col(0), dims) : QuantumState::density(data, dims);
}

Operator circuit_unitary(const QubitCircuit& circ) {
  const Dims dims = Dims::qubits(circ.num_qubits());
  Matrix u = Matrix::Identity(dims.total(), dims.total());
  for (const Gate& g : circ.gates()) u = gate_unitary(g, circ.num_qubits(), circ.custom_gates()).matrix() * u;
  return {u, dims};
}

// ---------------------------------------------------------------- standard circuits

QubitCircuit qft_circuit(int n) {
  QubitCircuit qc(n);
  for (int i = 0; i < n; ++i) {
    qc.add_gate(gates::h(i));
    for (int j = 1; j < n - i; ++j) {
      // Controlled phase pi / 2^j, control i + j, target i.
      const double phi = pi / std::pow(2.0, j);
      const int ctrl = i + j;
      qc.add_gate(gates::cnot(ctrl, i));
      qc.add_gate(gates::rz(i, -phi / 2));
      qc.add_gate(gates::cnot(ctrl, i));
      qc.add_gate(gates::rz(ctrl, phi / 2));
      qc.add_gate(gates::rz(i, phi / 2));
      qc.add_gate(gates::globalphase(phi / 4));
    }
  }
  for (int i = 0; i < n / 2; ++i) qc.add_gate(gates::swap(i, n - 1 - i));
  return qc;
}

QubitCircuit deutsch_jozsa_circuit() {
  QubitCircuit qc(3);
  qc.add_gates({gates::x(2), gates::h(0), gates::h(1), gates::h(2), gates::cnot(0, 2), gates::cnot(1, 2),
                gates::h(0), gates::h(1)});
  return qc;
}

}  // namespace pulsesim
