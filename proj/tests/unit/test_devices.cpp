#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "pulsesim/devices.hpp"
#include "pulsesim/linalg.hpp"
#include "pulsesim/solvers.hpp"

using namespace pulsesim;
using std::numbers::pi;

namespace {

SolverOptions tight() {
  SolverOptions o;
  o.rtol = o.atol = 1e-10;
  return o;
}

/// Qubit-subspace block of the compiled propagator vs the ideal circuit unitary.
double compiled_fidelity(const QubitCircuit& circ, const HardwareModel& model) {
  const HamiltonianProgram prog = compile_circuit(circ, model);
  const auto idx = qubit_subspace_indices(model.dims(), model.num_qubits());
  const long d = model.dims().total();
  Matrix cols = Matrix::Zero(d, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) cols(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
  const Matrix u = propagate_unitary(assemble(prog), cols, 0.0, prog.total_time, tight());
  Matrix block(cols.cols(), cols.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) block.row(static_cast<Eigen::Index>(i)) = u.row(idx[i]);
  QubitCircuit padded(model.num_qubits());
  padded.add_gates(circ.gates());
  return unitary_fidelity(circuit_unitary(padded).matrix(), block);
}

QubitCircuit one(int n, Gate g) {
  QubitCircuit c(n);
  c.add_gate(std::move(g));
  return c;
}

const std::vector<double> kAngles = {pi, pi / 2, -pi / 2, 0.7, -2.3, pi / 4};

}  // namespace

TEST(SpinChainModel, ControlsAndLabels) {
  const SpinChainModel m(3);
  EXPECT_EQ(m.control_labels(), (std::vector<std::string>{"sx0", "sx1", "sx2", "sz0", "sz1", "sz2", "g0", "g1"}));
  const Control& c = m.get_control("sx0");
  EXPECT_EQ(c.targets, std::vector<int>{0});
  EXPECT_LT(linalg::max_abs(c.op.matrix() - 2 * pi * sigmax().matrix()), 1e-15);
  EXPECT_THROW(m.get_control("g2"), std::out_of_range);
  const Control& g = m.get_control("g1");
  EXPECT_EQ(g.targets, (std::vector<int>{1, 2}));
  const Matrix xx = tensor({sigmax(), sigmax()}).matrix() + tensor({sigmay(), sigmay()}).matrix();
  EXPECT_LT(linalg::max_abs(g.op.matrix() - 2 * pi * xx), 1e-15);

  SpinChainParams ring;
  ring.boundary = Boundary::Closed;
  const SpinChainModel r(4, ring);
  EXPECT_EQ(r.get_control("g3").targets, (std::vector<int>{3, 0}));
  EXPECT_EQ(r.topology(), Topology::Ring);
}

TEST(SpinChainCompiler, RxPiDurationAndFidelity) {
  const SpinChainModel m(1);
  const HamiltonianProgram p = compile_spinchain(one(1, gates::rx(0, pi)), m);
  ASSERT_EQ(p.pulses.size(), 1u);
  EXPECT_EQ(p.pulses[0].label(), "sx0");
  EXPECT_NEAR(p.total_time, 1.0, 1e-15);
  EXPECT_EQ(p.pulses[0].coeff().coeff(), std::vector<double>{0.25});
  const Matrix u = propagator(assemble(p), tight());
  const Matrix ideal = gate_matrix(gates::rx(0, pi));
  EXPECT_GT(unitary_fidelity(ideal, u), 1 - 1e-6);
}

TEST(SpinChainCompiler, NativeGatesFidelity) {
  const SpinChainModel m(2);
  for (double th : kAngles) {
    EXPECT_GT(compiled_fidelity(one(2, gates::rx(1, th)), m), 1 - 1e-4) << th;
    EXPECT_GT(compiled_fidelity(one(2, gates::rz(0, th)), m), 1 - 1e-4) << th;
  }
  EXPECT_GT(compiled_fidelity(one(2, gates::iswap(0, 1)), m), 1 - 1e-4);
  EXPECT_GT(compiled_fidelity(one(2, gates::iswap(1, 0)), m), 1 - 1e-4);
}

TEST(SpinChainCompiler, EmptyCircuit) {
  const HamiltonianProgram p = compile_spinchain(QubitCircuit(3), SpinChainModel(3));
  EXPECT_TRUE(p.pulses.empty());
  EXPECT_EQ(p.total_time, 0.0);
}

TEST(SpinChainCompiler, DeutschJozsaSwapsOnG0) {
  const SpinChainModel m(3);
  const HamiltonianProgram p = compile_spinchain(deutsch_jozsa_circuit(), m);
  const Pulse* g0 = nullptr;
  const Pulse* g1 = nullptr;
  for (const auto& pl : p.pulses) {
    if (pl.label() == "g0") g0 = &pl;
    if (pl.label() == "g1") g1 = &pl;
  }
  ASSERT_NE(g0, nullptr);
  ASSERT_NE(g1, nullptr);
  // The first CNOT(0, 2) is routed through g1, flanked by SWAP(0, 1) on g0.
  auto active = [](const Pulse& pl) {
    std::vector<std::pair<double, double>> w;
    const auto& t = pl.coeff().tlist();
    const auto& c = pl.coeff().coeff();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) w.emplace_back(t[i], t[i + 1]);
    return w;
  };
  const auto w0 = active(*g0);
  const auto w1 = active(*g1);
  ASSERT_FALSE(w0.empty());
  ASSERT_FALSE(w1.empty());
  EXPECT_LT(w0.front().first, w1.front().first);
  bool after = false;
  for (const auto& [a, b] : w0) after = after || a >= w1.front().second;
  EXPECT_TRUE(after);
}

TEST(SpinChainCompiler, AmplitudesWithinLimits) {
  const SpinChainModel m(4);
  const HamiltonianProgram p = compile_spinchain(qft_circuit(4), m);
  for (const auto& pl : p.pulses) EXPECT_LE(pl.coeff().max_abs(), m.get_control(pl.label()).limit) << pl.label();
}

TEST(SpinChainCompiler, RingRoutesAcrossTheWrap) {
  SpinChainParams ring;
  ring.boundary = Boundary::Closed;
  const SpinChainModel m(4, ring);
  QubitCircuit c(4);
  c.add_gate(gates::cnot(3, 0));
  EXPECT_GT(compiled_fidelity(c, m), 1 - 1e-4);
  const HamiltonianProgram p = compile_spinchain(c, m);
  for (const auto& pl : p.pulses) EXPECT_NE(pl.label(), "g1");
}

TEST(SCQubitsModel, CrossResonanceOperator) {
  const SCQubitsModel m(2);
  const Control& c = m.get_control("cr10");
  EXPECT_EQ(c.targets, (std::vector<int>{0, 1}));
  // Hand-built 9x9: |i j><k l| entries of Z (x) X on levels {0, 1}.
  Matrix want = Matrix::Zero(9, 9);
  auto id = [](int a, int b) { return 3 * a + b; };
  const double z[2] = {1.0, -1.0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) want(id(a, b), id(a, 1 - b)) = 2 * pi * z[a];
  EXPECT_LT(linalg::max_abs(c.op.matrix() - want), 1e-15);
  EXPECT_THROW(m.get_control("cr11"), std::out_of_range);
}

TEST(SCQubitsCompiler, GaussianEnvelopeHasUnitArea) {
  const int n = 20001;
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 0.3 * k / (n - 1);
    const double w = (k == 0 || k == n - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    area += w * gaussian_envelope(t, 0.3);
  }
  area *= 0.3 / (3.0 * (n - 1));
  EXPECT_NEAR(area, 1.0, 1e-10);
  EXPECT_NEAR(gaussian_envelope(0.0, 0.3), 0.0, 1e-15);
}

TEST(SCQubitsCompiler, NativeGatesFidelity) {
  const SCQubitsModel m(2);
  for (double th : kAngles) {
    const double fx = compiled_fidelity(one(2, gates::rx(0, th)), m);
    const double fy = compiled_fidelity(one(2, gates::ry(1, th)), m);
    EXPECT_GT(fx, 1 - 1e-4) << th;
    EXPECT_GT(fy, 1 - 1e-4) << th;
  }
  const double f01 = compiled_fidelity(one(2, gates::cnot(0, 1)), m);
  const double f10 = compiled_fidelity(one(2, gates::cnot(1, 0)), m);
  EXPECT_GT(f01, 1 - 1e-4);
  EXPECT_GT(f10, 1 - 1e-4);
}

TEST(CavityQEDCompiler, NativeGatesFidelity) {
  const CavityQEDModel m(2);
  for (double th : kAngles) {
    EXPECT_GT(compiled_fidelity(one(2, gates::rx(0, th)), m), 1 - 1e-4) << th;
    EXPECT_GT(compiled_fidelity(one(2, gates::ry(1, th)), m), 1 - 1e-4) << th;
  }
  const double f = compiled_fidelity(one(2, gates::iswap(0, 1)), m);
  EXPECT_GT(f, 1 - 1e-4);
}

TEST(SCQubitsCompiler, LeakageOfHalfPiPulse) {
  const SCQubitsModel m(1);
  const HamiltonianProgram p = compile_scqubits(one(1, gates::rx(0, pi / 2)), m);
  const QuantumState psi0 = basis(m.dims(), {0});
  const SolverResult r = sesolve(assemble(p), psi0, {}, {Operator(basis(3, 2).to_density().data())}, tight());
  EXPECT_LT(r.expect[0].back(), 1e-2);
  EXPECT_GE(r.expect[0].back(), 0.0);
}

TEST(SCQubitsCompiler, ZeroAngleGivesZeroPulse) {
  const SCQubitsModel m(1);
  const HamiltonianProgram p = compile_scqubits(one(1, gates::rx(0, 0.0)), m);
  ASSERT_EQ(p.pulses.size(), 1u);
  EXPECT_TRUE(p.pulses[0].coeff().is_zero());
  EXPECT_EQ(p.pulses[0].coeff().kind(), ControlCoefficient::Kind::Cubic);
}

TEST(SCQubitsCompiler, DeutschJozsaControlUsage) {
  const SCQubitsModel m(3);
  const HamiltonianProgram p = compile_scqubits(deutsch_jozsa_circuit(), m);
  std::set<std::string> used;
  for (const auto& pl : p.pulses)
    if (!pl.coeff().is_zero()) used.insert(pl.label());
  EXPECT_TRUE(used.count("cr10"));
  EXPECT_TRUE(used.count("cr11"));
  // No CNOT is controlled by qubit 2 and acts on qubit 1.
  EXPECT_FALSE(used.count("cr21"));
  for (const auto& pl : p.pulses) EXPECT_LE(pl.coeff().max_abs(), m.get_control(pl.label()).limit + 1e-12);
}

TEST(SCQubitsCompiler, PulsesRespectDriveLimit) {
  SCQubitsParams prm;
  prm.gate_time = 0.02;
  const SCQubitsModel m(1, prm);
  const HamiltonianProgram p = compile_scqubits(one(1, gates::rx(0, pi)), m);
  EXPECT_LE(p.pulses[0].coeff().max_abs(), prm.omega_max * (1 + 1e-12));
  EXPECT_GT(p.total_time, prm.gate_time);
  EXPECT_GT(compiled_fidelity(one(1, gates::rx(0, pi)), m), 0.99);
}

TEST(SCQubitsCompiler, RejectsUncoupledCnot) {
  const SCQubitsModel m(3);
  const SCQubitsCompiler c(m);
  EXPECT_THROW(c.compile_gate(gates::cnot(0, 2)), std::logic_error);
  EXPECT_THROW(c.compile_gate(gates::h(0)), std::invalid_argument);
}

TEST(CavityQEDModel, Layout) {
  const CavityQEDModel m(3);
  EXPECT_EQ(m.dims().sizes(), (std::vector<int>{2, 2, 2, 10}));
  EXPECT_EQ(m.get_control("g1").targets, (std::vector<int>{1, 3}));
  EXPECT_EQ(m.topology(), Topology::AllToAll);
  EXPECT_THROW(CavityQEDModel(2, CavityQEDParams{.delta = 0.0}), std::invalid_argument);
}

TEST(CavityQEDCompiler, SingleQubitGatesLeaveResonatorEmpty) {
  const CavityQEDModel m(2);
  QubitCircuit c(2);
  c.add_gate(gates::h(0));
  c.add_gate(gates::rx(1, 0.4));
  c.add_gate(gates::ry(0, -1.0));
  const HamiltonianProgram p = compile_cavityqed(c, m);
  for (const auto& pl : p.pulses) EXPECT_NE(pl.label().front(), 'g');
  const QuantumState psi0 = basis(m.dims(), {1, 0, 0});
  const Operator n_res = Operator(expand_operator(num(10), std::vector<int>{2}, m.dims()).matrix(), m.dims());
  const SolverResult r = sesolve(assemble(p), psi0, {}, {n_res});
  EXPECT_LT(r.expect[0].back(), 1e-4);
}

TEST(CavityQEDCompiler, EmptyAndSerializedCouplings) {
  const CavityQEDModel m(4);
  EXPECT_TRUE(compile_cavityqed(QubitCircuit(4), m).pulses.empty());
  QubitCircuit c(4);
  c.add_gate(gates::iswap(0, 1));
  c.add_gate(gates::iswap(2, 3));
  const HamiltonianProgram p = compile_cavityqed(c, m);
  double end01 = 0.0, start23 = 1e300;
  for (const auto& pl : p.pulses) {
    if (pl.label() == "g0") end01 = std::max(end01, pl.coeff().end());
    if (pl.label() == "g2") start23 = std::min(start23, pl.coeff().start());
  }
  EXPECT_LE(end01, start23 + 1e-12);
}

TEST(CavityQEDCompiler, NonAdjacentIswap) {
  const CavityQEDModel m(3);
  EXPECT_GT(compiled_fidelity(one(3, gates::iswap(0, 2)), m), 1 - 1e-4);
}
