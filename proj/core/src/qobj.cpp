#include "pulsesim/qobj.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "pulsesim/linalg.hpp"

namespace pulsesim {

namespace {

// Index bookkeeping for splitting a register into "selected" and "rest"
// subsystems. full_index[r * local_dim + l] is the full basis index.
struct SplitIndex {
  long local_dim = 1;
  long rest_dim = 1;
  std::vector<long> local_of;  // full index -> local index
  std::vector<long> rest_of;   // full index -> rest index
  std::vector<long> full_index;
};

SplitIndex split_register(std::span<const int> targets, const Dims& dims) {
  const int n = dims.num_subsystems();
  std::vector<bool> selected(static_cast<std::size_t>(n), false);
  for (int t : targets) {
    if (t < 0 || t >= n) throw std::out_of_range("target index " + std::to_string(t) + " out of range");
    if (selected[static_cast<std::size_t>(t)]) throw std::invalid_argument("duplicate target index");
    selected[static_cast<std::size_t>(t)] = true;
  }
  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (!selected[static_cast<std::size_t>(k)]) rest.push_back(k);

  SplitIndex s;
  for (int t : targets) s.local_dim *= dims[t];
  for (int r : rest) s.rest_dim *= dims[r];
  const long total = dims.total();
  s.local_of.resize(static_cast<std::size_t>(total));
  s.rest_of.resize(static_cast<std::size_t>(total));
  s.full_index.resize(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) {
    const auto d = linalg::digits(i, dims.sizes());
    long l = 0;
    for (int t : targets) l = l * dims[t] + d[static_cast<std::size_t>(t)];
    long r = 0;
    for (int k : rest) r = r * dims[k] + d[static_cast<std::size_t>(k)];
    s.local_of[static_cast<std::size_t>(i)] = l;
    s.rest_of[static_cast<std::size_t>(i)] = r;
    s.full_index[static_cast<std::size_t>(r * s.local_dim + l)] = i;
  }
  return s;
}

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------- Dims

Dims::Dims(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  for (int d : sizes_)
    if (d < 2) throw std::invalid_argument("subsystem dimension must be >= 2");
}

Dims Dims::qubits(int n) {
  if (n < 1) throw std::invalid_argument("number of qubits must be positive");
  return Dims(std::vector<int>(static_cast<std::size_t>(n), 2));
}

long Dims::total() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), 1L, [](long a, int b) { return a * b; });
}

Dims Dims::select(std::span<const int> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= num_subsystems()) throw std::out_of_range("subsystem index out of range");
    out.push_back(sizes_[static_cast<std::size_t>(i)]);
  }
  return Dims(std::move(out));
}

Dims Dims::concat(const Dims& other) const {
  std::vector<int> out = sizes_;
  out.insert(out.end(), other.sizes_.begin(), other.sizes_.end());
  return Dims(std::move(out));
}

// ---------------------------------------------------------------- Operator

Operator::Operator(Matrix m, Dims dims) : m_(std::move(m)), dims_(std::move(dims)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("operator matrix must be square");
  if (m_.rows() != dims_.total()) throw std::invalid_argument("operator matrix size does not match dims");
}

Operator::Operator(Matrix m) : Operator(m, Dims({static_cast<int>(m.rows())})) {}

bool Operator::is_hermitian(double tol) const { return linalg::max_abs(m_ - m_.adjoint()) < tol; }

bool Operator::is_unitary(double tol) const {
  return linalg::max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())) < tol;
}

Operator Operator::operator+(const Operator& o) const {
  require_same_dims(dims_, o.dims_, "operator +");
  return {m_ + o.m_, dims_};
}

Operator Operator::operator-(const Operator& o) const {
  require_same_dims(dims_, o.dims_, "operator -");
  return {m_ - o.m_, dims_};
}

Operator Operator::operator*(const Operator& o) const {
  require_same_dims(dims_, o.dims_, "operator *");
  return {m_ * o.m_, dims_};
}

// ---------------------------------------------------------------- QuantumState

QuantumState QuantumState::ket(Vector psi, Dims dims) {
  if (psi.size() != dims.total()) throw std::invalid_argument("ket size does not match dims");
  return {StateKind::Ket, Matrix(psi), std::move(dims)};
}

QuantumState QuantumState::density(Matrix rho, Dims dims) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (rho.rows() != dims.total()) throw std::invalid_argument("density matrix size does not match dims");
  return {StateKind::Density, std::move(rho), std::move(dims)};
}

Vector QuantumState::vec() const {
  if (!is_ket()) throw std::logic_error("vec() requires a ket");
  return data_.col(0);
}

QuantumState QuantumState::to_density() const {
  if (!is_ket()) return *this;
  return density(data_ * data_.adjoint(), dims_);
}

QuantumState QuantumState::normalized() const {
  if (is_ket()) return ket(data_.col(0).normalized(), dims_);
  return density(data_ / data_.trace(), dims_);
}

double QuantumState::norm() const { return is_ket() ? data_.norm() : data_.trace().real(); }

// ---------------------------------------------------------------- tensor

Operator tensor(std::span<const Operator> ops) {
  if (ops.empty()) throw std::invalid_argument("tensor of an empty list");
  Matrix m = ops[0].matrix();
  Dims dims = ops[0].dims();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    m = Matrix(Eigen::kroneckerProduct(m, ops[i].matrix()));
    dims = dims.concat(ops[i].dims());
  }
  return {std::move(m), std::move(dims)};
}

Operator tensor(std::initializer_list<Operator> ops) {
  return tensor(std::span<const Operator>(ops.begin(), ops.size()));
}

QuantumState tensor(std::span<const QuantumState> states) {
  if (states.empty()) throw std::invalid_argument("tensor of an empty list");
  const StateKind kind = states[0].kind();
  Matrix m = states[0].data();
  Dims dims = states[0].dims();
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i].kind() != kind) throw std::invalid_argument("tensor of mixed kets and density matrices");
    m = Matrix(Eigen::kroneckerProduct(m, states[i].data()));
    dims = dims.concat(states[i].dims());
  }
  return kind == StateKind::Ket ? QuantumState::ket(m.col(0), dims) : QuantumState::density(m, dims);
}

QuantumState tensor(std::initializer_list<QuantumState> states) {
  return tensor(std::span<const QuantumState>(states.begin(), states.size()));
}

// ---------------------------------------------------------------- expand

Matrix expand_matrix(const Matrix& op, std::span<const int> targets, const Dims& dims) {
  if (targets.empty()) throw std::invalid_argument("expand_operator needs at least one target");
  const SplitIndex s = split_register(targets, dims);
  if (op.rows() != s.local_dim || op.cols() != s.local_dim)
    throw std::invalid_argument("operator dimension does not match target subsystems");
  const long total = dims.total();
  Matrix out = Matrix::Zero(total, total);
  for (long i = 0; i < total; ++i) {
    const long li = s.local_of[static_cast<std::size_t>(i)];
    const long base = s.rest_of[static_cast<std::size_t>(i)] * s.local_dim;
    for (long lj = 0; lj < s.local_dim; ++lj) {
      const cplx v = op(li, lj);
      if (v != cplx{}) out(i, s.full_index[static_cast<std::size_t>(base + lj)]) = v;
    }
  }
  return out;
}

SparseMatrix expand_sparse(const Matrix& op, std::span<const int> targets, const Dims& dims) {
  if (targets.empty()) throw std::invalid_argument("expand_operator needs at least one target");
  const SplitIndex s = split_register(targets, dims);
  if (op.rows() != s.local_dim || op.cols() != s.local_dim)
    throw std::invalid_argument("operator dimension does not match target subsystems");
  const long total = dims.total();
  std::vector<Eigen::Triplet<cplx>> entries;
  for (long i = 0; i < total; ++i) {
    const long li = s.local_of[static_cast<std::size_t>(i)];
    const long base = s.rest_of[static_cast<std::size_t>(i)] * s.local_dim;
    for (long lj = 0; lj < s.local_dim; ++lj) {
      const cplx v = op(li, lj);
      if (v != cplx{}) entries.emplace_back(i, s.full_index[static_cast<std::size_t>(base + lj)], v);
    }
  }
  SparseMatrix out(total, total);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Operator expand_operator(const Operator& op, std::span<const int> targets, const Dims& dims) {
  if (!(op.dims() == dims.select(targets)) && op.dims().num_subsystems() != 1)
    throw std::invalid_argument("operator dims do not match the selected subsystems");
  return {expand_matrix(op.matrix(), targets, dims), dims};
}

Operator expand_operator(const Operator& op, std::initializer_list<int> targets, const Dims& dims) {
  return expand_operator(op, std::span<const int>(targets.begin(), targets.size()), dims);
}

// ---------------------------------------------------------------- expect

cplx expect(const Operator& op, const QuantumState& state) {
  require_same_dims(op.dims(), state.dims(), "expect");
  if (state.is_ket()) {
    const auto psi = state.data().col(0);
    return psi.dot(op.matrix() * psi);
  }
  return (op.matrix() * state.data()).trace();
}

// ---------------------------------------------------------------- standard operators

Operator identity(int d) { return Operator(Matrix::Identity(d, d)); }

Operator identity(const Dims& dims) {
  return {Matrix::Identity(dims.total(), dims.total()), dims};
}

Operator sigmax() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m);
}

Operator sigmay() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return Operator(m);
}

Operator sigmaz() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m);
}

Operator sigmap() { return create(2); }
Operator sigmam() { return destroy(2); }

Operator destroy(int d) {
  if (d < 2) throw std::invalid_argument("destroy: dimension must be >= 2");
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) m(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  return Operator(m);
}

Operator create(int d) { return destroy(d).dag(); }

Operator num(int d) {
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = static_cast<double>(i);
  return Operator(m);
}

QuantumState basis(int d, int n) {
  if (d < 2) throw std::invalid_argument("basis: dimension must be >= 2");
  if (n < 0 || n >= d) throw std::out_of_range("basis: level out of range");
  Vector v = Vector::Zero(d);
  v[n] = 1.0;
  return QuantumState::ket(v, Dims({d}));
}

QuantumState basis(const Dims& dims, std::span<const int> levels) {
  if (static_cast<int>(levels.size()) != dims.num_subsystems())
    throw std::invalid_argument("basis: one level per subsystem required");
  long idx = 0;
  for (int k = 0; k < dims.num_subsystems(); ++k) {
    const int l = levels[static_cast<std::size_t>(k)];
    if (l < 0 || l >= dims[k]) throw std::out_of_range("basis: level out of range");
    idx = idx * dims[k] + l;
  }
  Vector v = Vector::Zero(dims.total());
  v[idx] = 1.0;
  return QuantumState::ket(v, dims);
}

QuantumState basis(const Dims& dims, std::initializer_list<int> levels) {
  return basis(dims, std::span<const int>(levels.begin(), levels.size()));
}

// ---------------------------------------------------------------- metrics

double state_fidelity(const QuantumState& a, const QuantumState& b) {
  require_same_dims(a.dims(), b.dims(), "state_fidelity");
  if (a.is_ket() && b.is_ket()) return std::norm(a.data().col(0).dot(b.data().col(0)));
  if (a.is_ket() || b.is_ket()) {
    const QuantumState& k = a.is_ket() ? a : b;
    const QuantumState& d = a.is_ket() ? b : a;
    const auto psi = k.data().col(0);
    return std::clamp(psi.dot(d.data() * psi).real(), 0.0, 1.0);
  }
  const Matrix sa = linalg::sqrtm_psd(a.data());
  const Matrix inner = sa * b.data() * sa;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  require_same_dims(a.dims(), b.dims(), "trace_distance");
  const Matrix diff = a.to_density().data() - b.to_density().data();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double unitary_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw std::invalid_argument("unitary_fidelity: size mismatch");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

// ---------------------------------------------------------------- ptrace

QuantumState ptrace(const QuantumState& state, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("ptrace: keep list is empty");
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  const Dims& dims = state.dims();
  const SplitIndex s = split_register(sorted, dims);
  const Matrix rho = state.to_density().data();
  Matrix out = Matrix::Zero(s.local_dim, s.local_dim);
  for (long r = 0; r < s.rest_dim; ++r) {
    for (long a = 0; a < s.local_dim; ++a) {
      const long ia = s.full_index[static_cast<std::size_t>(r * s.local_dim + a)];
      for (long b = 0; b < s.local_dim; ++b)
        out(a, b) += rho(ia, s.full_index[static_cast<std::size_t>(r * s.local_dim + b)]);
    }
  }
  return QuantumState::density(std::move(out), dims.select(sorted));
}

QuantumState ptrace(const QuantumState& state, std::initializer_list<int> keep) {
  return ptrace(state, std::span<const int>(keep.begin(), keep.size()));
}

}  // namespace pulsesim
