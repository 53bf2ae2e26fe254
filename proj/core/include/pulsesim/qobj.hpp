#pragma once

// Dense quantum objects: subsystem signatures, operators and states.
//
// Subsystem 0 is the leftmost tensor factor, i.e. the most significant digit
// of a basis index. All objects are immutable values once constructed.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pulsesim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr cplx kI{0.0, 1.0};

/// Hilbert-space dimension of each subsystem, in tensor order.
class Dims {
 public:
  Dims() = default;
  explicit Dims(std::vector<int> sizes);
  Dims(std::initializer_list<int> sizes) : Dims(std::vector<int>(sizes)) {}

  static Dims qubits(int n);

  const std::vector<int>& sizes() const { return sizes_; }
  int num_subsystems() const { return static_cast<int>(sizes_.size()); }
  int operator[](int i) const { return sizes_.at(static_cast<std::size_t>(i)); }
  long total() const;

  Dims select(std::span<const int> indices) const;
  Dims concat(const Dims& other) const;

  friend bool operator==(const Dims&, const Dims&) = default;

 private:
  std::vector<int> sizes_;
};

class Operator {
 public:
  Operator() = default;
  Operator(Matrix m, Dims dims);
  /// Single-subsystem operator of dimension m.rows().
  explicit Operator(Matrix m);

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  long dim() const { return m_.rows(); }

  Operator dag() const { return {m_.adjoint(), dims_}; }
  bool is_hermitian(double tol = 1e-10) const;
  bool is_unitary(double tol = 1e-10) const;

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator*(cplx s) const { return {m_ * s, dims_}; }
  friend Operator operator*(cplx s, const Operator& a) { return a * s; }
  Operator operator*(double s) const { return {m_ * s, dims_}; }
  friend Operator operator*(double s, const Operator& a) { return a * s; }

 private:
  Matrix m_;
  Dims dims_;
};

enum class StateKind { Ket, Density };

class QuantumState {
 public:
  QuantumState() = default;

  static QuantumState ket(Vector psi, Dims dims);
  static QuantumState density(Matrix rho, Dims dims);

  StateKind kind() const { return kind_; }
  bool is_ket() const { return kind_ == StateKind::Ket; }
  /// Column vector for kets, square matrix for density matrices.
  const Matrix& data() const { return data_; }
  Vector vec() const;
  const Dims& dims() const { return dims_; }
  long dim() const { return data_.rows(); }

  QuantumState to_density() const;
  QuantumState normalized() const;
  double norm() const;

 private:
  QuantumState(StateKind k, Matrix d, Dims dims)
      : kind_(k), data_(std::move(d)), dims_(std::move(dims)) {}

  StateKind kind_ = StateKind::Ket;
  Matrix data_;
  Dims dims_;
};

Operator tensor(std::span<const Operator> ops);
Operator tensor(std::initializer_list<Operator> ops);
QuantumState tensor(std::span<const QuantumState> states);
QuantumState tensor(std::initializer_list<QuantumState> states);

/// Lifts `op` (acting on the subsystems listed in `targets`, in that order)
/// to the full register described by `dims`.
Operator expand_operator(const Operator& op, std::span<const int> targets, const Dims& dims);
Operator expand_operator(const Operator& op, std::initializer_list<int> targets, const Dims& dims);
/// Same as expand_operator, on a bare matrix.
Matrix expand_matrix(const Matrix& op, std::span<const int> targets, const Dims& dims);
/// Same as expand_matrix, storing only the nonzero entries.
SparseMatrix expand_sparse(const Matrix& op, std::span<const int> targets, const Dims& dims);

cplx expect(const Operator& op, const QuantumState& state);

Operator identity(int d);
Operator identity(const Dims& dims);
Operator sigmax();
Operator sigmay();
Operator sigmaz();
/// Raising operator |1><0|.
Operator sigmap();
/// Lowering operator |0><1|, identical to destroy(2).
Operator sigmam();
Operator destroy(int d);
Operator create(int d);
Operator num(int d);
QuantumState basis(int d, int n);
/// Product basis state with `levels[i]` on subsystem i.
QuantumState basis(const Dims& dims, std::span<const int> levels);
QuantumState basis(const Dims& dims, std::initializer_list<int> levels);

double state_fidelity(const QuantumState& a, const QuantumState& b);
double trace_distance(const QuantumState& a, const QuantumState& b);
/// |Tr(U^dag V)| / d, insensitive to global phase.
double unitary_fidelity(const Matrix& u, const Matrix& v);

/// Reduced density matrix on `keep` (sorted ascending).
QuantumState ptrace(const QuantumState& state, std::span<const int> keep);
QuantumState ptrace(const QuantumState& state, std::initializer_list<int> keep);

}  // namespace pulsesim
