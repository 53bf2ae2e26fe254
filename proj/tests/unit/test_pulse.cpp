#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "pulsesim/devices.hpp"
#include "pulsesim/linalg.hpp"

using namespace pulsesim;
using std::numbers::pi;

TEST(Coefficient, StepValues) {
  const auto c = ControlCoefficient::step({0.0, pi}, {1.0});
  EXPECT_EQ(c(1.0), 1.0);
  EXPECT_EQ(c(4.0), 0.0);
  EXPECT_EQ(c(0.0), 1.0);
  EXPECT_EQ(c(pi), 0.0);
  EXPECT_EQ(c.left(pi), 1.0);
  EXPECT_EQ(c.left(0.0), 0.0);
  EXPECT_EQ(c(-1.0), 0.0);
}

TEST(Coefficient, CubicInterpolatesSine) {
  std::vector<double> t, v;
  for (int i = 0; i < 50; ++i) {
    t.push_back(2 * pi * i / 49);
    v.push_back(std::sin(t.back()));
  }
  const auto c = ControlCoefficient::cubic(t, v);
  EXPECT_NEAR(c(1.3), std::sin(1.3), 1e-4);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(c(t[i]), v[i], 1e-14);
  EXPECT_NEAR(c.integral(), 0.0, 1e-6);
}

TEST(Coefficient, CubicReproducesLines) {
  const auto c = ControlCoefficient::cubic({0.0, 0.5, 1.7, 3.0}, {1.0, 2.0, 4.4, 7.0});
  for (double x : {0.1, 0.9, 2.2, 2.99}) EXPECT_NEAR(c(x), 1.0 + 2.0 * x, 1e-13);
  EXPECT_NEAR(c.integral(), 3.0 + 9.0, 1e-12);
}

TEST(Coefficient, MaxAbsAndIntegralAgainstSampling) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> t{0.0}, v;
    for (int i = 0; i < 8; ++i) t.push_back(t.back() + 0.1 + (u(rng) + 1));
    for (std::size_t i = 0; i < t.size(); ++i) v.push_back(u(rng));
    const auto c = ControlCoefficient::cubic(t, v);
    double best = 0.0, area = 0.0;
    const int n = 200000;
    const double h = (t.back() - t.front()) / n;
    for (int k = 0; k <= n; ++k) {
      const double x = std::min(t.front() + k * h, t.back());
      best = std::max(best, std::abs(c(x)));
      area += (k == 0 || k == n ? 0.5 : 1.0) * c(x) * h;
    }
    EXPECT_GE(c.max_abs() + 1e-12, best);
    EXPECT_NEAR(c.max_abs(), best, 1e-6);
    EXPECT_NEAR(c.integral(), area, 1e-6);
  }
}

TEST(Coefficient, ShiftScaleAndValidation) {
  const auto c = ControlCoefficient::cubic({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  const auto s = c.shifted(3.0).scaled(-2.0);
  for (double x : {0.2, 0.7, 1.5}) EXPECT_NEAR(s(x + 3.0), -2.0 * c(x), 1e-14);
  EXPECT_EQ(s.knots(), (std::vector<double>{3.0, 5.0}));
  EXPECT_THROW(ControlCoefficient::step({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(ControlCoefficient::step({1.0, 0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ControlCoefficient::cubic({0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ControlCoefficient::step({0.0, 1.0}, {NAN}), std::invalid_argument);
}

TEST(Coefficient, MergeSteps) {
  const auto m = merge_steps({ControlCoefficient::constant(2.0, 3.0, 4.0), ControlCoefficient::constant(1.0, 0.0, 1.0),
                              ControlCoefficient::constant(-1.0, 1.0, 2.0)});
  EXPECT_EQ(m.tlist(), (std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0}));
  EXPECT_EQ(m.coeff(), (std::vector<double>{1.0, -1.0, 0.0, 2.0}));
  EXPECT_THROW(merge_steps({ControlCoefficient::constant(1.0, 0.0, 2.0), ControlCoefficient::constant(1.0, 1.0, 3.0)}),
               std::invalid_argument);
  EXPECT_TRUE(merge_steps({}).empty());
}

TEST(Assemble, HamiltonianIsHermitianAtRandomTimes) {
  const SpinChainModel m(3);
  const HamiltonianProgram p = compile_spinchain(deutsch_jozsa_circuit(), m);
  const OpenSystem sys = assemble(p);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-0.1, p.total_time + 0.1);
  for (int k = 0; k < 1000; ++k) {
    const Matrix h = sys.hamiltonian.dense_at(u(rng));
    ASSERT_LT(linalg::max_abs(h - h.adjoint()), 1e-12);
  }
}

TEST(Assemble, DisjointPulsesGiveBlockSum) {
  HamiltonianProgram p;
  p.dims = Dims::qubits(2);
  p.pulses.emplace_back(sigmax(), std::vector<int>{0}, ControlCoefficient::constant(0.7, 0.0, 1.0), "a");
  p.pulses.emplace_back(sigmaz(), std::vector<int>{1}, ControlCoefficient::constant(-0.3, 0.0, 1.0), "b");
  p.total_time = 1.0;
  const Matrix h = assemble(p).hamiltonian.dense_at(0.5);
  const Matrix want = 0.7 * tensor({sigmax(), identity(2)}).matrix() - 0.3 * tensor({identity(2), sigmaz()}).matrix();
  EXPECT_LT(linalg::max_abs(h - want), 1e-15);
}

TEST(Assemble, IdenticalTermsMergeAndNoiseToggles) {
  HamiltonianProgram p;
  p.dims = Dims::qubits(1);
  Pulse a(sigmax(), {0}, ControlCoefficient::constant(1.0, 0.0, 1.0), "a");
  a.add_control_noise(sigmaz(), {0}, ControlCoefficient::constant(0.1, 0.0, 1.0));
  a.add_lindblad_noise(sigmam(), {0});
  p.pulses.push_back(a);
  p.pulses.emplace_back(sigmax(), std::vector<int>{0}, ControlCoefficient::constant(2.0, 1.0, 2.0), "b");
  p.total_time = 2.0;
  const OpenSystem noisy = assemble(p);
  EXPECT_EQ(noisy.hamiltonian.num_terms(), 2u);
  EXPECT_EQ(noisy.c_ops.size(), 1u);
  EXPECT_EQ(noisy.knots, (std::vector<double>{0.0, 1.0, 2.0}));
  const OpenSystem clean = assemble(p, false);
  EXPECT_EQ(clean.hamiltonian.num_terms(), 1u);
  EXPECT_TRUE(clean.c_ops.empty());
  EXPECT_NEAR(clean.hamiltonian.term_coeff(0, 1.5), 2.0, 0.0);
}

TEST(PulseJson, StructureAndDeterminism) {
  const SpinChainModel m(3);
  const HamiltonianProgram p = compile_spinchain(deutsch_jozsa_circuit(), m);
  const std::string a = pulses_to_json(p);
  EXPECT_EQ(a, pulses_to_json(compile_spinchain(deutsch_jozsa_circuit(), m)));
  const auto doc = nlohmann::json::parse(a);
  EXPECT_NEAR(doc["total_time"].get<double>(), p.total_time, 1e-9);
  ASSERT_EQ(doc["pulses"].size(), p.pulses.size());
  EXPECT_EQ(doc["pulses"][0]["kind"], "step");
  EXPECT_EQ(doc["pulses"][0]["label"], p.pulses[0].label());
  HamiltonianProgram empty;
  EXPECT_EQ(nlohmann::json::parse(pulses_to_json(empty))["pulses"].size(), 0u);
}
