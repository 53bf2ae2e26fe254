#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "pulsesim/processor.hpp"

using namespace pulsesim;
using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HamiltonianProgram idle_program(int n, double total) {
  HamiltonianProgram p;
  p.dims = Dims::qubits(n);
  p.total_time = total;
  return p;
}

SolverOptions tight() {
  SolverOptions o;
  o.rtol = o.atol = 1e-10;
  return o;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(t_end * i / n);
  return t;
}

/// Decay rate from a log-linear least-squares fit.
double fitted_rate(const std::vector<double>& t, const std::vector<double>& y) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double l = std::log(y[i]);
    st += t[i];
    sy += l;
    stt += t[i] * t[i];
    sty += t[i] * l;
  }
  return -(n * sty - st * sy) / (n * stt - st * st);
}

double excited_after(double t1, double t) {
  HamiltonianProgram p = idle_program(1, t);
  DecoherenceSpec spec;
  spec.t1 = {t1};
  p = apply_noise_models(p, {std::make_shared<DecoherenceNoise>(spec)}, 1);
  const SolverResult r = mesolve(assemble(p), basis(2, 1), {0.0, t}, {num(2)}, tight());
  return r.expect[0].back();
}

}  // namespace

TEST(Relaxation, SingleQubitLowering) {
  const auto ops = relaxation_ops({1.0}, Dims::qubits(1));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].op.matrix(), sigmam().matrix());
  EXPECT_NEAR(excited_after(1.0, 1.0), std::exp(-1.0), 1e-6);
}

TEST(Relaxation, AbsentAndInfinite) {
  EXPECT_TRUE(relaxation_ops({}, Dims::qubits(2)).empty());
  EXPECT_TRUE(relaxation_ops({std::nullopt, std::nullopt}, Dims::qubits(2)).empty());
  const auto ops = relaxation_ops({1.0, kInf}, Dims::qubits(2));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].targets, std::vector<int>{0});
  EXPECT_THROW(relaxation_ops({0.0}, Dims::qubits(1)), std::invalid_argument);
  EXPECT_THROW(relaxation_ops({-2.0}, Dims::qubits(1)), std::invalid_argument);
}

TEST(Relaxation, ThreeLevelUsesFullDestroy) {
  const auto ops = relaxation_ops({4.0}, Dims({3}));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_TRUE(ops[0].op.matrix().isApprox(destroy(3).matrix() * 0.5));
}

TEST(Relaxation, HalvingT1DoublesRate) {
  auto rate = [](double t1) {
    HamiltonianProgram p = idle_program(1, 3.0 * t1);
    DecoherenceSpec spec;
    spec.t1 = {t1};
    p = apply_noise_models(p, {std::make_shared<DecoherenceNoise>(spec)}, 1);
    const auto t = grid(3.0 * t1, 30);
    const SolverResult r = mesolve(assemble(p), basis(2, 1), t, {num(2)}, tight());
    return fitted_rate(t, r.expect[0]);
  };
  const double r10 = rate(10.0);
  const double r5 = rate(5.0);
  EXPECT_NEAR(r5 / r10, 2.0, 0.04);
}

TEST(Dephasing, PureDephasingOperator) {
  const auto ops = dephasing_ops({kInf}, {2.0}, Dims::qubits(1));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_TRUE(ops[0].op.matrix().isApprox(num(2).matrix()));

  HamiltonianProgram p = idle_program(1, 10.0);
  for (auto& t : ops) p.c_ops.push_back(t);
  const QuantumState plus = QuantumState::ket(Vector::Constant(2, 1.0 / std::sqrt(2.0)), Dims::qubits(1));
  const auto t = grid(10.0, 20);
  const SolverResult r = mesolve(assemble(p), plus, t, {}, tight());
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_NEAR(std::abs(r.states[i].data()(0, 1)), 0.5 * std::exp(-t[i] / 2.0), 1e-6);
}

TEST(Dephasing, SaturatedByRelaxation) {
  EXPECT_TRUE(dephasing_ops({5.0}, {10.0}, Dims::qubits(1)).empty());
  EXPECT_THROW(dephasing_ops({5.0}, {10.5}, Dims::qubits(1)), std::invalid_argument);
  const auto ops = dephasing_ops({10.0}, {10.0}, Dims::qubits(1));
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_TRUE(ops[0].op.matrix().isApprox(num(2).matrix() * std::sqrt(2.0 * (0.1 - 0.05))));
  EXPECT_TRUE(dephasing_ops({}, {}, Dims::qubits(2)).empty());
}

TEST(Dephasing, CombinedT1T2Coherence) {
  const double t1 = 8.0;
  const double t2 = 5.0;
  HamiltonianProgram p = idle_program(1, 10.0);
  p = apply_noise_models(p, {std::make_shared<DecoherenceNoise>(DecoherenceSpec::uniform(1, t1, t2))}, 1);
  const QuantumState plus = QuantumState::ket(Vector::Constant(2, 1.0 / std::sqrt(2.0)), Dims::qubits(1));
  const auto t = grid(10.0, 10);
  const SolverResult r = mesolve(assemble(p), plus, t, {}, tight());
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_NEAR(std::abs(r.states[i].data()(0, 1)), 0.5 * std::exp(-t[i] / t2), 1e-6);
}

TEST(Decoherence, ConstructorMatchesExplicitSpec) {
  auto model = std::make_shared<SpinChainModel>(3);
  Processor a(model, 40.0, 25.0);
  DecoherenceSpec spec;
  spec.t1 = {40.0, 40.0, 40.0};
  spec.t2 = {25.0, 25.0, 25.0};
  Processor b(model, spec);
  a.load_circuit(deutsch_jozsa_circuit());
  b.load_circuit(deutsch_jozsa_circuit());
  const OpenSystem sa = a.system();
  const OpenSystem sb = b.system();
  ASSERT_EQ(sa.c_ops.size(), 6u);
  ASSERT_EQ(sa.c_ops.size(), sb.c_ops.size());
  for (std::size_t k = 0; k < sa.c_ops.size(); ++k)
    EXPECT_LT((Matrix(sa.c_ops[k].op) - Matrix(sb.c_ops[k].op)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Decoherence, CustomCollapseOperators) {
  DecoherenceSpec spec;
  spec.custom.push_back({sigmax() * 0.5, {1}, std::nullopt});
  EXPECT_FALSE(spec.empty());
  HamiltonianProgram p = apply_noise_models(idle_program(2, 1.0), {std::make_shared<DecoherenceNoise>(spec)}, 2);
  ASSERT_EQ(p.c_ops.size(), 1u);
  EXPECT_EQ(p.c_ops[0].targets, std::vector<int>{1});
  EXPECT_THROW(DecoherenceNoise(DecoherenceSpec::uniform(1, 1.0, 3.0)), std::invalid_argument);
}

TEST(ApplyNoise, EmptyListIsIdentity) {
  SpinChainModel m(2);
  QubitCircuit c(2);
  c.add_gate(gates::x(0));
  const HamiltonianProgram ideal = compile_circuit(c, m);
  const HamiltonianProgram out = apply_noise_models(ideal, {}, 2);
  EXPECT_EQ(pulses_to_json(out), pulses_to_json(ideal));
  ASSERT_EQ(out.pulses.size(), ideal.pulses.size());
  for (const auto& p : out.pulses) EXPECT_FALSE(p.has_noise());
  EXPECT_TRUE(out.c_ops.empty());
}

TEST(ApplyNoise, UnionAndIdealUntouched) {
  SpinChainModel m(3);
  QubitCircuit c(3);
  c.add_gate(gates::x(1));
  const HamiltonianProgram ideal = compile_circuit(c, m);
  const std::string before = pulses_to_json(ideal);
  const auto xt = classical_crosstalk(0.5);
  const auto deco = std::make_shared<DecoherenceNoise>(DecoherenceSpec::uniform(3, 20.0, std::nullopt));
  const HamiltonianProgram a = apply_noise_models(ideal, {xt}, 3);
  const HamiltonianProgram b = apply_noise_models(ideal, {deco}, 3);
  const HamiltonianProgram both = apply_noise_models(ideal, {xt, deco}, 3);
  EXPECT_EQ(pulses_to_json(ideal), before);
  for (const auto& p : ideal.pulses) EXPECT_FALSE(p.has_noise());
  std::size_t na = 0, nboth = 0;
  for (const auto& p : a.pulses) na += p.control_noise().size();
  for (const auto& p : both.pulses) nboth += p.control_noise().size();
  EXPECT_EQ(na, 2u);
  EXPECT_EQ(nboth, na);
  EXPECT_EQ(both.c_ops.size(), b.c_ops.size());
  EXPECT_EQ(b.c_ops.size(), 3u);
}

TEST(Crosstalk, ZeroRatioAddsNothing) {
  SpinChainModel m(3);
  QubitCircuit c(3);
  c.add_gate(gates::x(1));
  const HamiltonianProgram out = apply_noise_models(compile_circuit(c, m), {classical_crosstalk(0.0)}, 3);
  for (const auto& p : out.pulses) EXPECT_FALSE(p.has_noise());
  EXPECT_THROW(classical_crosstalk(-0.1), std::invalid_argument);
}

TEST(Crosstalk, SkipsDiagonalAndTwoQubitPulses) {
  SpinChainModel m(3);
  QubitCircuit c(3);
  c.add_gate(gates::rz(1, 0.4));
  c.add_gate(gates::iswap(0, 1));
  const HamiltonianProgram out = apply_noise_models(compile_circuit(c, m), {classical_crosstalk(1.0)}, 3);
  for (const auto& p : out.pulses) EXPECT_FALSE(p.has_noise());
}

TEST(Crosstalk, DetunedNeighbourMatchesRabiFormula) {
  const double omega = 0.02;
  const double delta = 0.3;
  HardwareModel m(2, Dims::qubits(2));
  m.add_control("sx0", sigmax() * pi, {0});
  m.add_drift(sigmaz() * (pi * delta), {1});
  Processor proc(std::make_shared<HardwareModel>(m));
  const double t_pi = 1.0 / (2.0 * omega);
  proc.set_coefficients({{"sx0", {{0.0, t_pi}, {omega}}}});
  proc.add_noise(classical_crosstalk(1.0));
  const Operator n1 = expand_operator(num(2), {1}, Dims::qubits(2));
  const Operator n0 = expand_operator(num(2), {0}, Dims::qubits(2));
  const SolverResult r =
      proc.run_state(basis(Dims::qubits(2), {0, 0}), SolverKind::Sesolve, {0.0, t_pi}, {n0, n1}, tight());
  const double w = std::hypot(omega, delta);
  const double flip = omega * omega / (w * w) * std::pow(std::sin(pi * w * t_pi), 2);
  EXPECT_NEAR(r.expect[0].back(), 1.0, 1e-7);
  EXPECT_NEAR(r.expect[1].back(), flip, 1e-7);
  EXPECT_GT(flip, 1e-4);
}

TEST(RandomAmplitude, SeededAndShaped) {
  SpinChainModel m(1);
  QubitCircuit c(1);
  c.add_gate(gates::x(0));
  const HamiltonianProgram ideal = compile_circuit(c, m);
  const auto a = apply_noise_models(ideal, {std::make_shared<RandomAmplitudeNoise>(0.01, 0.1, 3)}, 1);
  const auto b = apply_noise_models(ideal, {std::make_shared<RandomAmplitudeNoise>(0.01, 0.1, 3)}, 1);
  const auto d = apply_noise_models(ideal, {std::make_shared<RandomAmplitudeNoise>(0.01, 0.1, 4)}, 1);
  ASSERT_EQ(a.pulses[0].control_noise().size(), 1u);
  const auto& ca = *a.pulses[0].control_noise()[0].coeff;
  EXPECT_EQ(ca.coeff(), b.pulses[0].control_noise()[0].coeff->coeff());
  EXPECT_NE(ca.coeff(), d.pulses[0].control_noise()[0].coeff->coeff());
  EXPECT_EQ(ca.coeff().size(), 10u);
  EXPECT_DOUBLE_EQ(ca.end(), ideal.pulses[0].coeff().end());
  const auto z = apply_noise_models(ideal, {std::make_shared<RandomAmplitudeNoise>(0.0, 0.1, 3)}, 1);
  const SolverResult r0 = sesolve(assemble(ideal), basis(2, 0), {}, {}, tight());
  const SolverResult r1 = sesolve(assemble(z), basis(2, 0), {}, {}, tight());
  EXPECT_EQ(r0.final_state.data(), r1.final_state.data());
}

TEST(PulseNoise, ZeroLindbladCoefficientIsNoiseless) {
  SpinChainModel m(1);
  QubitCircuit c(1);
  c.add_gate(gates::rx(0, 1.1));
  HamiltonianProgram p = compile_circuit(c, m);
  const ControlCoefficient& ideal = p.pulses[0].coeff();
  Pulse& pulse = p.pulses[0];
  pulse.add_lindblad_noise(sigmaz(), {0}, ideal.scaled(0.0));
  const SolverResult clean = mesolve(assemble(p, false), basis(2, 0).to_density(), {}, {}, tight());
  const SolverResult noisy = mesolve(assemble(p, true), basis(2, 0).to_density(), {}, {}, tight());
  EXPECT_LT(trace_distance(clean.final_state, noisy.final_state), 1e-10);
}
