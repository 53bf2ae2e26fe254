#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "pulsesim/circuit.hpp"

namespace pulsesim {

using std::numbers::pi;

namespace native_sets {
std::set<std::string> spin_chain() { return {"RX", "RZ", "ISWAP"}; }
std::set<std::string> superconducting() { return {"RX", "RY", "CNOT"}; }
std::set<std::string> cavity_qed() { return {"RX", "RY", "ISWAP"}; }
std::set<std::string> single_qubit_xy() { return {"RX", "RY"}; }
}  // namespace native_sets

namespace {

constexpr int kMaxDepth = 16;

using GateList = std::vector<Gate>;

[[noreturn]] void no_rule(const Gate& g) {
  throw std::invalid_argument("no decomposition of gate '" + g.name + "' into the requested native set");
}

// U = e^{i alpha} RZ(beta) RY(gamma) RZ(delta).
GateList euler_zyz(const Matrix& u, int q) {
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = std::arg(det) / 2.0;
  const Matrix v = u * std::exp(-kI * alpha);
  const double gamma = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double sum = 0.0;
  double diff = 0.0;
  if (std::abs(v(1, 0)) < 1e-12) {
    sum = 2.0 * std::arg(v(1, 1));
  } else if (std::abs(v(0, 0)) < 1e-12) {
    diff = 2.0 * std::arg(v(1, 0));
  } else {
    sum = 2.0 * std::arg(v(1, 1));
    diff = 2.0 * std::arg(v(1, 0));
  }
  const double beta = (sum + diff) / 2.0;
  const double delta = (sum - diff) / 2.0;
  return {gates::rz(q, delta), gates::ry(q, gamma), gates::rz(q, beta), gates::globalphase(alpha)};
}

GateList toffoli_rule(int a, int b, int c) {
  auto tdg = [](int q) { return Gate{"TDG", {q}, {}, std::nullopt}; };
  return {gates::h(c),       gates::cnot(b, c), tdg(c),          gates::cnot(a, c), gates::t(c),
          gates::cnot(b, c), tdg(c),            gates::cnot(a, c), gates::t(b),     gates::t(c),
          gates::h(c),       gates::cnot(a, b), gates::t(a),     tdg(b),            gates::cnot(a, b)};
}

GateList rule(const Gate& g, const std::set<std::string>& native, const CustomGateTable& custom) {
  auto has = [&](const char* n) { return native.count(n) > 0; };
  const std::string& n = g.name;
  const double a = g.arg.value_or(0.0);
  if (n == "ID") return {};
  if (n.size() == 1 || n == "SDG" || n == "TDG" || n == "PHASE") {
    const int q = g.targets.at(0);
    if (n == "X") return {gates::rx(q, pi), gates::globalphase(pi / 2)};
    if (n == "Y") return {gates::ry(q, pi), gates::globalphase(pi / 2)};
    if (n == "Z") return {gates::rz(q, pi), gates::globalphase(pi / 2)};
    if (n == "H" && has("RZ") && has("RX"))
      return {gates::rz(q, pi / 2), gates::rx(q, pi / 2), gates::rz(q, pi / 2), gates::globalphase(pi / 2)};
    if (n == "H") return {gates::ry(q, pi / 2), gates::rx(q, pi), gates::globalphase(pi / 2)};
    if (n == "S") return {gates::rz(q, pi / 2), gates::globalphase(pi / 4)};
    if (n == "SDG") return {gates::rz(q, -pi / 2), gates::globalphase(-pi / 4)};
    if (n == "T") return {gates::rz(q, pi / 4), gates::globalphase(pi / 8)};
    if (n == "TDG") return {gates::rz(q, -pi / 4), gates::globalphase(-pi / 8)};
    if (n == "PHASE") return {gates::rz(q, a), gates::globalphase(a / 2)};
  }
  if (n == "RX" && has("RY") && has("RZ")) {
    const int q = g.targets[0];
    return {gates::rz(q, pi / 2), gates::ry(q, a), gates::rz(q, -pi / 2)};
  }
  if (n == "RY" && has("RX") && has("RZ")) {
    const int q = g.targets[0];
    return {gates::rz(q, -pi / 2), gates::rx(q, a), gates::rz(q, pi / 2)};
  }
  if (n == "RZ" && has("RX") && has("RY")) {
    const int q = g.targets[0];
    return {gates::rx(q, -pi / 2), gates::ry(q, a), gates::rx(q, pi / 2)};
  }
  if (n == "CNOT") {
    const int c = g.controls[0];
    const int t = g.targets[0];
    if (has("ISWAP"))
      return {gates::rz(t, pi / 2),  gates::iswap(c, t),   gates::rx(c, pi / 2), gates::iswap(c, t),
              gates::rz(c, -pi / 2), gates::rz(t, pi / 2), gates::rx(t, pi / 2), gates::globalphase(pi / 4)};
    if (has("CZ")) return {gates::h(t), gates::cz(c, t), gates::h(t)};
    no_rule(g);
  }
  if (n == "CZ") {
    const int t = g.targets[0];
    return {gates::h(t), gates::cnot(g.controls[0], t), gates::h(t)};
  }
  if (n == "SWAP") {
    const int p = g.targets[0];
    const int q = g.targets[1];
    if (has("CNOT")) return {gates::cnot(p, q), gates::cnot(q, p), gates::cnot(p, q)};
    if (has("ISWAP"))
      return {gates::iswap(p, q), gates::rx(p, pi / 2), gates::iswap(p, q), gates::rx(q, pi / 2),
              gates::iswap(p, q), gates::rx(p, pi / 2), gates::globalphase(pi / 4)};
    no_rule(g);
  }
  if (n == "ISWAP") {
    const int p = g.targets[0];
    const int q = g.targets[1];
    if (has("CNOT"))
      return {gates::h(q), gates::cnot(q, p), gates::cnot(p, q), gates::h(p), gates::s(p), gates::s(q)};
    no_rule(g);
  }
  if (n == "TOFFOLI") return toffoli_rule(g.controls[0], g.controls[1], g.targets[0]);
  if (auto it = custom.find(n); it != custom.end() && it->second.num_targets == 1)
    return euler_zyz(gate_matrix(g, custom), g.targets[0]);
  no_rule(g);
}

void lower(const Gate& g, const std::set<std::string>& native, const CustomGateTable& custom, int depth,
           GateList& out) {
  if (g.name == "GLOBALPHASE" || native.count(g.name)) {
    out.push_back(g);
    return;
  }
  if (depth > kMaxDepth) no_rule(g);
  for (const Gate& sub : rule(g, native, custom)) lower(sub, native, custom, depth + 1, out);
}

// Positions visited when moving the qubit at `from` next to `to`.
std::vector<int> chain_path(int from, int to, int n, bool ring) {
  std::vector<int> path{from};
  const int fwd = ((to - from) % n + n) % n;
  int step = to > from ? 1 : -1;
  int dist = std::abs(to - from);
  if (ring && std::min(fwd, n - fwd) < dist) {
    step = fwd <= n - fwd ? 1 : -1;
    dist = std::min(fwd, n - fwd);
  }
  int p = from;
  for (int k = 0; k + 1 < dist; ++k) {
    p = ((p + step) % n + n) % n;
    path.push_back(p);
  }
  return path;
}

}  // namespace

QubitCircuit decompose_to_native(const QubitCircuit& circ, const std::set<std::string>& native) {
  QubitCircuit out = circ.empty_copy();
  GateList buf;
  for (const Gate& g : circ.gates()) {
    buf.clear();
    lower(g, native, circ.custom_gates(), 0, buf);
    out.add_gates(buf);
  }
  return out;
}

QubitCircuit insert_chain_swaps(const QubitCircuit& circ, bool ring, bool iswap_moves) {
  const int n = circ.num_qubits();
  QubitCircuit out = circ.empty_copy();
  auto adjacent = [&](int p, int q) {
    const int d = std::abs(p - q);
    return d == 1 || (ring && n > 2 && d == n - 1);
  };
  for (const Gate& g : circ.gates()) {
    const std::vector<int> qs = g.qubits();
    if (qs.size() > 2) {
      if (g.name != "TOFFOLI") throw std::invalid_argument("cannot route gate '" + g.name + "' on more than two qubits");
      const GateList parts = toffoli_rule(g.controls[0], g.controls[1], g.targets[0]);
      QubitCircuit tmp = circ.empty_copy();
      tmp.add_gates(parts);
      const QubitCircuit routed = insert_chain_swaps(tmp, ring, iswap_moves);
      out.add_gates(routed.gates());
      continue;
    }
    if (qs.size() < 2 || adjacent(qs[0], qs[1])) {
      out.add_gate(g);
      continue;
    }
    const int lo = std::min(qs[0], qs[1]);
    const int hi = std::max(qs[0], qs[1]);
    const std::vector<int> path = chain_path(lo, hi, n, ring);
    const bool lo_diagonal = (g.name == "CNOT" && g.controls[0] == lo) || g.name == "CZ";
    if (iswap_moves && path.size() == 2 && lo_diagonal) {
      Gate moved = g;
      for (auto* v : {&moved.targets, &moved.controls})
        for (int& q : *v)
          if (q == lo) q = path[1];
      out.add_gates({gates::iswap(path[0], path[1]), moved, gates::iswap(path[0], path[1]), gates::z(path[0]),
                     gates::z(path[1])});
      continue;
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) out.add_gate(gates::swap(path[k], path[k + 1]));
    Gate moved = g;
    auto relabel = [&](std::vector<int>& v) {
      for (int& q : v)
        if (q == lo) q = path.back();
    };
    relabel(moved.targets);
    relabel(moved.controls);
    out.add_gate(moved);
    for (std::size_t k = path.size() - 1; k-- > 0;) out.add_gate(gates::swap(path[k], path[k + 1]));
  }
  return out;
}

}  // namespace pulsesim
