#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "pulsesim/circuit.hpp"
#include "pulsesim/linalg.hpp"

using namespace pulsesim;
using std::numbers::pi;

namespace {

double fid(const QubitCircuit& a, const QubitCircuit& b) {
  return unitary_fidelity(circuit_unitary(a).matrix(), circuit_unitary(b).matrix());
}

QubitCircuit random_circuit(int n, int len, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, 11);
  std::uniform_int_distribution<int> qd(0, n - 1);
  std::uniform_real_distribution<double> ang(-pi, pi);
  QubitCircuit qc(n);
  for (int k = 0; k < len; ++k) {
    const int a = qd(rng);
    int b = qd(rng);
    while (b == a) b = qd(rng);
    switch (pick(rng)) {
      case 0: qc.add_gate(gates::x(a)); break;
      case 1: qc.add_gate(gates::y(a)); break;
      case 2: qc.add_gate(gates::z(a)); break;
      case 3: qc.add_gate(gates::h(a)); break;
      case 4: qc.add_gate(gates::s(a)); break;
      case 5: qc.add_gate(gates::t(a)); break;
      case 6: qc.add_gate(gates::rx(a, ang(rng))); break;
      case 7: qc.add_gate(gates::ry(a, ang(rng))); break;
      case 8: qc.add_gate(gates::rz(a, ang(rng))); break;
      case 9: qc.add_gate(gates::cnot(a, b)); break;
      case 10: qc.add_gate(gates::swap(a, b)); break;
      default: qc.add_gate(gates::iswap(a, b)); break;
    }
  }
  return qc;
}

int count(const QubitCircuit& qc, const std::string& name) {
  int c = 0;
  for (const Gate& g : qc.gates()) c += g.name == name;
  return c;
}

}  // namespace

TEST(GateUnitary, RxPi) {
  const Matrix u = gate_unitary(gates::rx(0, pi), 1).matrix();
  EXPECT_LT(linalg::max_abs(u - (-kI) * sigmax().matrix()), 1e-12);
}

TEST(GateUnitary, CnotPermutesTenAndEleven) {
  const Matrix u = gate_unitary(gates::cnot(0, 1), 2).matrix();
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = want(1, 1) = want(2, 3) = want(3, 2) = 1;
  EXPECT_LT(linalg::max_abs(u - want), 1e-12);
}

TEST(GateUnitary, IswapFromExchangeHamiltonian) {
  const Matrix xx = tensor({sigmax(), sigmax()}).matrix();
  const Matrix yy = tensor({sigmay(), sigmay()}).matrix();
  const Matrix oracle = linalg::expm(cplx(0, pi / 4) * (xx + yy));
  EXPECT_LT(linalg::max_abs(gate_unitary(gates::iswap(0, 1), 2).matrix() - oracle), 1e-12);
}

TEST(GateUnitary, AllBuiltinsUnitary) {
  const std::vector<Gate> gs = {gates::x(0),        gates::y(1),        gates::z(2),         gates::h(0),
                                gates::s(1),        gates::t(2),        gates::rx(0, 0.3),   gates::ry(1, -1.2),
                                gates::rz(2, 2.1),  gates::cnot(2, 0),  gates::cz(0, 1),     gates::swap(0, 2),
                                gates::iswap(1, 2), gates::toffoli(0, 2, 1), gates::globalphase(0.4)};
  for (const Gate& g : gs) {
    const Matrix u = gate_unitary(g, 3).matrix();
    EXPECT_LT(linalg::max_abs(u.adjoint() * u - Matrix::Identity(8, 8)), 1e-10) << g.name;
  }
}

TEST(GateUnitary, UnknownGate) {
  EXPECT_THROW(gate_matrix(Gate{"FOO", {0}, {}, std::nullopt}), std::invalid_argument);
}

TEST(Circuit, Validation) {
  QubitCircuit qc(2);
  EXPECT_THROW(qc.add_gate(gates::cnot(0, 0)), std::invalid_argument);
  EXPECT_THROW(qc.add_gate(gates::x(2)), std::out_of_range);
  EXPECT_THROW(qc.add_gate(Gate{"RX", {0}, {}, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(qc.add_gate(Gate{"SWAP", {0}, {}, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(QubitCircuit(0), std::invalid_argument);
}

TEST(Circuit, CustomGate) {
  QubitCircuit qc(2);
  qc.register_gate("SQRTX", CustomGate{1, [](std::optional<double>) {
                                          Matrix m(2, 2);
                                          m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
                                          return m;
                                        }});
  qc.add_gate(Gate{"SQRTX", {1}, {}, std::nullopt});
  qc.add_gate(Gate{"SQRTX", {1}, {}, std::nullopt});
  QubitCircuit ref(2);
  ref.add_gate(gates::x(1));
  EXPECT_NEAR(fid(qc, ref), 1.0, 1e-12);
  const QubitCircuit low = decompose_to_native(qc, native_sets::spin_chain());
  EXPECT_NEAR(fid(low, ref), 1.0, 1e-12);
}

TEST(RunGateLevel, Examples) {
  const QuantumState psi = basis(Dims::qubits(1), {0});
  QubitCircuit empty(1);
  EXPECT_LT(linalg::max_abs(run_gate_level(empty, psi).data() - psi.data()), 1e-15);
  QubitCircuit xx(1);
  xx.add_gates({gates::x(0), gates::x(0)});
  EXPECT_LT(linalg::max_abs(run_gate_level(xx, psi).data() - psi.data()), 1e-12);
  EXPECT_THROW(run_gate_level(xx, basis(Dims::qubits(2), {0, 0})), std::invalid_argument);
}

TEST(RunGateLevel, DeutschJozsa) {
  const QubitCircuit dj = deutsch_jozsa_circuit();
  ASSERT_EQ(dj.gates().size(), 8u);
  const QuantumState out = run_gate_level(dj, basis(Dims::qubits(3), {0, 0, 0}));
  EXPECT_LT(std::norm(out.data()(0, 0)) + std::norm(out.data()(1, 0)), 1e-20);
  EXPECT_NEAR(out.norm(), 1.0, 1e-10);
  const Vector via_unitary = circuit_unitary(dj).matrix().col(0);
  EXPECT_LT(linalg::max_abs(via_unitary - out.vec()), 1e-12);
}

TEST(CircuitUnitary, Involutions) {
  QubitCircuit hh(1);
  hh.add_gates({gates::h(0), gates::h(0)});
  EXPECT_LT(linalg::max_abs(circuit_unitary(hh).matrix() - Matrix::Identity(2, 2)), 1e-12);
  QubitCircuit cc(2);
  cc.add_gates({gates::cnot(0, 1), gates::cnot(0, 1)});
  EXPECT_LT(linalg::max_abs(circuit_unitary(cc).matrix() - Matrix::Identity(4, 4)), 1e-12);
}

TEST(Qft, MatchesDiscreteFourierMatrix) {
  for (int n = 1; n <= 4; ++n) {
    const long d = 1L << n;
    Matrix f(d, d);
    for (long j = 0; j < d; ++j)
      for (long k = 0; k < d; ++k) f(j, k) = std::exp(cplx(0, 2 * pi * double(j * k) / double(d))) / std::sqrt(double(d));
    EXPECT_LT(linalg::max_abs(circuit_unitary(qft_circuit(n)).matrix() - f), 1e-10) << n;
  }
}

TEST(Decompose, SwapIntoThreeCnots) {
  QubitCircuit qc(2);
  qc.add_gate(gates::swap(0, 1));
  const QubitCircuit low = decompose_to_native(qc, native_sets::superconducting());
  EXPECT_EQ(count(low, "CNOT"), 3);
  EXPECT_EQ(low.gates().size(), 3u);
  EXPECT_GT(fid(qc, low), 1 - 1e-9);
}

TEST(Decompose, CnotIntoTwoIswaps) {
  QubitCircuit qc(2);
  qc.add_gate(gates::cnot(0, 1));
  const QubitCircuit low = decompose_to_native(qc, native_sets::spin_chain());
  EXPECT_EQ(count(low, "ISWAP"), 2);
  for (const Gate& g : low.gates())
    EXPECT_TRUE(g.name == "ISWAP" || g.name == "RX" || g.name == "RZ" || g.name == "GLOBALPHASE") << g.name;
  EXPECT_LT(linalg::max_abs(circuit_unitary(low).matrix() - circuit_unitary(qc).matrix()), 1e-12);
}

TEST(Decompose, ExactUnitaryWithGlobalPhase) {
  const std::vector<std::set<std::string>> sets = {native_sets::spin_chain(), native_sets::superconducting(),
                                                   native_sets::cavity_qed()};
  for (unsigned seed = 0; seed < 6; ++seed) {
    const QubitCircuit qc = random_circuit(2 + seed % 3, 25, seed);
    for (const auto& native : sets) {
      const QubitCircuit low = decompose_to_native(qc, native);
      for (const Gate& g : low.gates()) EXPECT_TRUE(g.name == "GLOBALPHASE" || native.count(g.name)) << g.name;
      EXPECT_LT(linalg::max_abs(circuit_unitary(low).matrix() - circuit_unitary(qc).matrix()), 1e-10);
    }
  }
}

TEST(Decompose, ToffoliAndCz) {
  QubitCircuit qc(3);
  qc.add_gates({gates::toffoli(0, 1, 2), gates::cz(2, 0), gates::toffoli(2, 0, 1)});
  for (const auto& native : {native_sets::spin_chain(), native_sets::superconducting()}) {
    const QubitCircuit low = decompose_to_native(qc, native);
    EXPECT_GT(fid(qc, low), 1 - 1e-9);
  }
}

TEST(Decompose, SingleQubitOnlySet) {
  QubitCircuit qc(2);
  qc.add_gates({gates::h(0), gates::z(1), gates::t(0), gates::rz(1, 0.7), gates::s(1)});
  const QubitCircuit low = decompose_to_native(qc, native_sets::single_qubit_xy());
  EXPECT_GT(fid(qc, low), 1 - 1e-9);
  QubitCircuit two(2);
  two.add_gate(gates::cnot(0, 1));
  EXPECT_THROW(decompose_to_native(two, native_sets::single_qubit_xy()), std::invalid_argument);
}

TEST(Decompose, Idempotent) {
  for (const auto& native : {native_sets::spin_chain(), native_sets::superconducting(), native_sets::cavity_qed()}) {
    const QubitCircuit once = decompose_to_native(random_circuit(3, 20, 42), native);
    const QubitCircuit twice = decompose_to_native(once, native);
    EXPECT_EQ(once.gates(), twice.gates());
  }
}

TEST(Routing, DjExample) {
  QubitCircuit qc(3);
  qc.add_gate(gates::cnot(0, 2));
  const QubitCircuit r = insert_chain_swaps(qc);
  const std::vector<Gate> want = {gates::swap(0, 1), gates::cnot(1, 2), gates::swap(0, 1)};
  EXPECT_EQ(r.gates(), want);
}

TEST(Routing, IswapMoveForControl) {
  QubitCircuit qc(3);
  qc.add_gate(gates::cnot(0, 2));
  const std::vector<Gate> want = {gates::iswap(0, 1), gates::cnot(1, 2), gates::iswap(0, 1), gates::z(0), gates::z(1)};
  EXPECT_EQ(insert_chain_swaps(qc, false, true).gates(), want);
  EXPECT_GT(fid(qc, insert_chain_swaps(qc, false, true)), 1 - 1e-12);
  QubitCircuit rev(3);
  rev.add_gate(gates::cnot(2, 0));
  EXPECT_EQ(insert_chain_swaps(rev, false, true).gates(), insert_chain_swaps(rev).gates());
}

TEST(Routing, AdjacentUnchanged) {
  QubitCircuit qc(2);
  qc.add_gate(gates::cnot(0, 1));
  EXPECT_EQ(insert_chain_swaps(qc).gates(), qc.gates());
}

TEST(Routing, RandomCircuitsPreserveUnitary) {
  for (unsigned seed = 10; seed < 16; ++seed) {
    QubitCircuit qc = random_circuit(4, 30, seed);
    qc.add_gate(gates::toffoli(3, 0, 1));
    for (int mode = 0; mode < 4; ++mode) {
      const bool ring = mode & 1;
      const QubitCircuit r = insert_chain_swaps(qc, ring, mode & 2);
      for (const Gate& g : r.gates()) {
        const auto q = g.qubits();
        ASSERT_LE(q.size(), 2u);
        if (q.size() == 2) {
          const int d = std::abs(q[0] - q[1]);
          EXPECT_TRUE(d == 1 || (ring && d == 3));
        }
      }
      EXPECT_GT(fid(qc, r), 1 - 1e-9);
    }
  }
}
