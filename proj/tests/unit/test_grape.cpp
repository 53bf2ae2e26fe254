#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pulsesim/grape.hpp"
#include "pulsesim/linalg.hpp"
#include "pulsesim/processor.hpp"

using namespace pulsesim;
using std::numbers::pi;

namespace {

GrapeProblem hadamard_problem() {
  GrapeProblem p;
  p.drift = Matrix::Zero(2, 2);
  p.controls = {sigmax().matrix() * pi, sigmaz().matrix() * pi};
  p.target = gate_matrix(gates::h(0));
  p.n_ts = 10;
  p.evo_time = 1.0;
  p.seed = 1;
  p.fid_goal = 1e-6;
  return p;
}

Matrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return (a + a.adjoint()) * 0.5;
}

}  // namespace

TEST(Grape, HadamardSynthesis) {
  const GrapeProblem p = hadamard_problem();
  const GrapeResult r = grape_optimize(p);
  EXPECT_LT(r.infidelity, 1e-3);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(evaluate_infidelity(p, r.amplitudes), r.infidelity, 1e-10);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
}

TEST(Grape, BoundsRespected) {
  GrapeProblem p = hadamard_problem();
  p.amp_bound = 0.6;
  p.evo_time = 2.0;
  const GrapeResult r = grape_optimize(p);
  EXPECT_LE(r.amplitudes.cwiseAbs().maxCoeff(), 0.6);
  EXPECT_LT(r.infidelity, 1e-3);
  EXPECT_NEAR(evaluate_infidelity(p, r.amplitudes), r.infidelity, 1e-10);
}

TEST(Grape, IdentityFromZero) {
  GrapeProblem p = hadamard_problem();
  p.target = Matrix::Identity(2, 2);
  p.init = InitAmps::Zero;
  const GrapeResult r = grape_optimize(p);
  EXPECT_LT(r.infidelity, 1e-12);
  EXPECT_EQ(r.amplitudes.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Grape, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    GrapeProblem p;
    p.drift = random_hermitian(4, rng) * 0.3;
    p.controls = {random_hermitian(4, rng), random_hermitian(4, rng), random_hermitian(4, rng)};
    p.target = linalg::expm(random_hermitian(4, rng) * cplx(0.0, -1.0));
    p.n_ts = 6;
    p.evo_time = 1.3;
    Eigen::MatrixXd amps = Eigen::MatrixXd::Random(6, 3) * 0.8;
    Eigen::MatrixXd grad;
    grape_infidelity(p, amps, &grad);
    Eigen::MatrixXd fd(6, 3);
    const double eps = 1e-6;
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 3; ++j) {
        Eigen::MatrixXd a = amps;
        a(k, j) += eps;
        const double fp = evaluate_infidelity(p, a);
        a(k, j) -= 2 * eps;
        const double fm = evaluate_infidelity(p, a);
        fd(k, j) = (fp - fm) / (2 * eps);
      }
    EXPECT_LT((grad - fd).norm() / fd.norm(), 1e-4) << "trial " << trial;
  }
}

TEST(Grape, DegenerateSpectrumGradient) {
  GrapeProblem p = hadamard_problem();
  p.init = InitAmps::Zero;
  Eigen::MatrixXd amps = Eigen::MatrixXd::Zero(10, 2);
  Eigen::MatrixXd grad;
  grape_infidelity(p, amps, &grad);
  const double eps = 1e-6;
  Eigen::MatrixXd a = amps;
  a(3, 0) = eps;
  const double fp = evaluate_infidelity(p, a);
  a(3, 0) = -eps;
  const double fm = evaluate_infidelity(p, a);
  EXPECT_NEAR(grad(3, 0), (fp - fm) / (2 * eps), 1e-6);
}

TEST(Grape, Errors) {
  GrapeProblem p = hadamard_problem();
  p.target = Matrix::Ones(2, 2);
  EXPECT_THROW(grape_optimize(p), std::invalid_argument);
  p = hadamard_problem();
  p.n_ts = 0;
  EXPECT_THROW(grape_optimize(p), std::invalid_argument);
  p = hadamard_problem();
  p.evo_time = 0.0;
  EXPECT_THROW(grape_optimize(p), std::invalid_argument);
  p = hadamard_problem();
  p.controls.push_back(Matrix::Identity(3, 3));
  EXPECT_THROW(grape_optimize(p), std::invalid_argument);
}

TEST(Grape, IterationLimitIsReported) {
  GrapeProblem p = hadamard_problem();
  p.max_iters = 1;
  p.fid_goal = 1e-14;
  const GrapeResult r = grape_optimize(p);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 1);
}

TEST(OptCtrl, SingleGateHasNtsSlots) {
  SpinChainModel m(2);
  QubitCircuit c(2);
  c.add_gate(gates::x(0));
  const OptCtrlResult r = load_circuit_optctrl(c, m);
  ASSERT_EQ(r.program.pulses.size(), m.control_labels().size());
  for (const Pulse& p : r.program.pulses) EXPECT_EQ(p.coeff().coeff().size(), 10u);
  EXPECT_TRUE(r.all_converged);
  for (const Pulse& p : r.program.pulses)
    EXPECT_LE(p.coeff().max_abs(), m.get_control(p.label()).limit * (1 + 1e-12));
}

TEST(OptCtrl, RepeatedGatesGiveDifferentPulses) {
  SpinChainModel m(1);
  QubitCircuit c(1);
  c.add_gate(gates::h(0));
  c.add_gate(gates::h(0));
  const OptCtrlResult r = load_circuit_optctrl(c, m);
  const auto& v = r.program.pulses[0].coeff().coeff();
  ASSERT_EQ(v.size(), 20u);
  EXPECT_NE(std::vector<double>(v.begin(), v.begin() + 10), std::vector<double>(v.begin() + 10, v.end()));
}

TEST(OptCtrl, DeutschJozsaOnSpinChainControls) {
  auto m = std::make_shared<SpinChainModel>(3);
  const OptCtrlResult r = load_circuit_optctrl(deutsch_jozsa_circuit(), *m);
  EXPECT_TRUE(r.all_converged);
  Processor proc(m);
  proc.set_program(r.program);
  const QuantumState psi0 = basis(Dims::qubits(3), {0, 0, 0});
  SolverOptions o;
  o.rtol = o.atol = 1e-10;
  const SolverResult res = proc.run_state(psi0, SolverKind::Auto, {}, {}, o);
  EXPECT_GT(state_fidelity(res.final_state, run_gate_level(deutsch_jozsa_circuit(), psi0)), 0.99);
}

TEST(OptCtrl, RejectsMultiLevelRegisters) {
  SCQubitsModel m(2);
  EXPECT_THROW(load_circuit_optctrl(QubitCircuit(2), m), std::invalid_argument);
}
