#include <gtest/gtest.h>

#include <random>

#include "pulsesim/linalg.hpp"
#include "pulsesim/qobj.hpp"

using namespace pulsesim;

namespace {

Matrix random_density(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {n(rng), n(rng)};
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Matrix swap4() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
  return s;
}

}  // namespace

TEST(Dims, RejectsSmallEntries) {
  EXPECT_THROW(Dims({2, 1}), std::invalid_argument);
  EXPECT_EQ(Dims({2, 3, 4}).total(), 24);
}

TEST(Tensor, PauliZZ) {
  const Operator zz = tensor({sigmaz(), sigmaz()});
  Matrix want = Matrix::Zero(4, 4);
  want.diagonal() << 1, -1, -1, 1;
  EXPECT_LT(linalg::max_abs(zz.matrix() - want), 1e-12);
  EXPECT_EQ(zz.dims(), Dims({2, 2}));
}

TEST(Tensor, SingleIdentity) {
  EXPECT_LT(linalg::max_abs(tensor({identity(2)}).matrix() - Matrix::Identity(2, 2)), 1e-12);
}

TEST(Tensor, ProductOfPaddedPaulis) {
  const Operator lhs = tensor({sigmax(), identity(2)}) * tensor({identity(2), sigmax()});
  EXPECT_LT(linalg::max_abs(lhs.matrix() - tensor({sigmax(), sigmax()}).matrix()), 1e-12);
}

TEST(Tensor, AssociativeExactOnExactEntries) {
  // Small-integer entries make every product exact, so the two groupings must agree bit for bit.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-8, 8);
  auto ints = [&](int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = {double(d(rng)), double(d(rng))};
    return Operator(m);
  };
  const Operator a = ints(2), b = ints(3), c = ints(2);
  EXPECT_EQ(tensor({tensor({a, b}), c}).matrix(), tensor({a, tensor({b, c})}).matrix());
}

TEST(Tensor, AssociativeOnRandomEntries) {
  const Operator a(random_density(2, 1));
  const Operator b(random_density(3, 2));
  const Operator c(random_density(2, 3));
  const Matrix left = tensor({tensor({a, b}), c}).matrix();
  const Matrix right = tensor({a, tensor({b, c})}).matrix();
  EXPECT_LT(linalg::max_abs(left - right), 1e-15);
}

TEST(Tensor, EmptyAndMixedErrors) {
  std::vector<Operator> none;
  EXPECT_THROW(tensor(std::span<const Operator>(none)), std::invalid_argument);
}

TEST(Expand, IdentityOnUntouchedQubit) {
  const Operator e = expand_operator(sigmax(), {1}, Dims({2, 2}));
  EXPECT_LT(linalg::max_abs(e.matrix() - tensor({identity(2), sigmax()}).matrix()), 1e-12);
}

TEST(Expand, TwoTargetsOfThree) {
  const Operator zx = tensor({sigmaz(), sigmax()});
  const Operator e = expand_operator(zx, {0, 1}, Dims({2, 2, 2}));
  EXPECT_LT(linalg::max_abs(e.matrix() - tensor({sigmaz(), sigmax(), identity(2)}).matrix()), 1e-12);
}

TEST(Expand, ReversedTargetsEqualSwapConjugation) {
  const Matrix zx = tensor({sigmaz(), sigmax()}).matrix();
  const Operator e = expand_operator(Operator(zx, Dims({2, 2})), {1, 0}, Dims({2, 2}));
  EXPECT_LT(linalg::max_abs(e.matrix() - swap4() * zx * swap4()), 1e-12);
}

TEST(Expand, CommutesWithLocalProducts) {
  const Dims dims({2, 3, 2});
  const Operator a(random_density(2, 4));
  const Operator b(random_density(2, 5));
  const Matrix lhs = expand_operator(a, {0}, dims).matrix() * expand_operator(b, {2}, dims).matrix();
  const Matrix rhs = expand_operator(tensor({a, b}), {0, 2}, dims).matrix();
  EXPECT_LT(linalg::max_abs(lhs - rhs), 1e-12);
}

TEST(Expand, Errors) {
  EXPECT_THROW(expand_operator(sigmax(), {2}, Dims({2, 2})), std::out_of_range);
  EXPECT_THROW(expand_operator(destroy(3), {0}, Dims({2, 2})), std::invalid_argument);
}

TEST(Expect, Examples) {
  EXPECT_NEAR(expect(sigmaz(), basis(2, 0)).real(), 1.0, 1e-12);
  const QuantumState mixed = QuantumState::density(Matrix::Identity(2, 2) / 2.0, Dims({2}));
  EXPECT_NEAR(std::abs(expect(sigmaz(), mixed)), 0.0, 1e-12);
  Vector plus(2);
  plus << 1, 1;
  EXPECT_NEAR(expect(sigmax(), QuantumState::ket(plus / std::sqrt(2.0), Dims({2}))).real(), 1.0, 1e-12);
}

TEST(Expect, HermitianGivesRealValue) {
  const Operator h(random_density(4, 7), Dims({2, 2}));
  const QuantumState rho = QuantumState::density(random_density(4, 8), Dims({2, 2}));
  EXPECT_LE(std::abs(expect(h, rho).imag()), 1e-10);
}

TEST(StandardOps, Ladder) {
  Matrix a2(2, 2);
  a2 << 0, 1, 0, 0;
  EXPECT_LT(linalg::max_abs(destroy(2).matrix() - a2), 1e-12);
  Matrix n3 = Matrix::Zero(3, 3);
  n3.diagonal() << 0, 1, 2;
  EXPECT_LT(linalg::max_abs((create(3) * destroy(3)).matrix() - n3), 1e-12);
  const Matrix comm = destroy(20).matrix() * create(20).matrix() - create(20).matrix() * destroy(20).matrix();
  EXPECT_LT(linalg::max_abs(comm.topLeftCorner(19, 19) - Matrix::Identity(19, 19)), 1e-12);
  EXPECT_THROW(basis(2, 2), std::out_of_range);
}

TEST(Fidelity, Examples) {
  EXPECT_NEAR(state_fidelity(basis(2, 0), basis(2, 0)), 1.0, 1e-12);
  EXPECT_NEAR(state_fidelity(basis(2, 0), basis(2, 1)), 0.0, 1e-12);
  const QuantumState mixed = QuantumState::density(Matrix::Identity(2, 2) / 2.0, Dims({2}));
  EXPECT_NEAR(state_fidelity(basis(2, 0), mixed), 0.5, 1e-12);
}

TEST(Fidelity, DensityPairMatchesKetFormula) {
  Vector psi(2);
  psi << 0.6, cplx(0, 0.8);
  const QuantumState k = QuantumState::ket(psi, Dims({2}));
  const QuantumState rho = QuantumState::density(random_density(2, 11), Dims({2}));
  EXPECT_NEAR(state_fidelity(k.to_density(), rho), state_fidelity(k, rho), 1e-9);
}

TEST(Ptrace, ProductAndBell) {
  const QuantumState r = ptrace(basis(Dims({2, 2}), {0, 0}).to_density(), {0});
  EXPECT_LT(linalg::max_abs(r.data() - basis(2, 0).to_density().data()), 1e-12);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const QuantumState half = ptrace(QuantumState::ket(bell, Dims({2, 2})), {0});
  EXPECT_LT(linalg::max_abs(half.data() - Matrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(Ptrace, NestedAndPreservesTrace) {
  const QuantumState rho = QuantumState::density(random_density(8, 13), Dims({2, 2, 2}));
  const QuantumState a = ptrace(ptrace(rho, {0, 1}), {0});
  const QuantumState b = ptrace(rho, {0});
  EXPECT_LT(linalg::max_abs(a.data() - b.data()), 1e-12);
  const QuantumState c = ptrace(rho, {1, 2});
  EXPECT_NEAR(std::abs(c.data().trace() - 1.0), 0.0, 1e-12);
  EXPECT_LT(linalg::max_abs(c.data() - c.data().adjoint()), 1e-12);
}

TEST(Ptrace, Errors) {
  const QuantumState rho = basis(Dims({2, 2}), {0, 1});
  std::vector<int> none;
  EXPECT_THROW(ptrace(rho, std::span<const int>(none)), std::invalid_argument);
  EXPECT_THROW(ptrace(rho, {2}), std::out_of_range);
}
