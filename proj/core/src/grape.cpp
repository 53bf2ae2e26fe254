#include "pulsesim/grape.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "pulsesim/linalg.hpp"

namespace pulsesim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void validate(const GrapeProblem& p) {
  if (p.n_ts < 1) throw std::invalid_argument("GRAPE needs at least one time slot");
  if (!(p.evo_time > 0.0)) throw std::invalid_argument("GRAPE evolution time must be positive");
  if (p.controls.empty()) throw std::invalid_argument("GRAPE needs at least one control");
  const Eigen::Index d = p.target.rows();
  if (p.target.cols() != d || p.drift.rows() != d || p.drift.cols() != d)
    throw std::invalid_argument("GRAPE operators must share one square dimension");
  for (const Matrix& h : p.controls)
    if (h.rows() != d || h.cols() != d) throw std::invalid_argument("GRAPE operators must share one square dimension");
  if ((p.target.adjoint() * p.target - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("GRAPE target is not unitary");
  if (!p.amp_bounds.empty() && p.amp_bounds.size() != p.controls.size())
    throw std::invalid_argument("one amplitude bound per control");
}

double bound_of(const GrapeProblem& p, std::size_t j) { return p.amp_bounds.empty() ? p.amp_bound : p.amp_bounds[j]; }

Matrix slot_hamiltonian(const GrapeProblem& p, const MatrixXd& amps, int k) {
  Matrix h = p.drift;
  for (std::size_t j = 0; j < p.controls.size(); ++j) h += p.controls[j] * amps(k, static_cast<Eigen::Index>(j));
  return h;
}

MatrixXd to_amps(const VectorXd& x, int n_ts, int nc) {
  MatrixXd a(n_ts, nc);
  for (int k = 0; k < n_ts; ++k)
    for (int j = 0; j < nc; ++j) a(k, j) = x[k * nc + j];
  return a;
}

VectorXd to_vec(const MatrixXd& a) {
  VectorXd x(a.size());
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    for (Eigen::Index j = 0; j < a.cols(); ++j) x[k * a.cols() + j] = a(k, j);
  return x;
}

}  // namespace

double grape_infidelity(const GrapeProblem& p, const MatrixXd& amps, MatrixXd* grad) {
  validate(p);
  const int n = p.n_ts;
  const auto nc = static_cast<Eigen::Index>(p.controls.size());
  if (amps.rows() != n || amps.cols() != nc) throw std::invalid_argument("amplitude matrix must be n_ts x n_controls");
  const Eigen::Index d = p.target.rows();
  const double dt = p.evo_time / n;

  std::vector<Matrix> vecs(n);
  std::vector<Eigen::VectorXd> vals(n);
  std::vector<Matrix> u(n);
  for (int k = 0; k < n; ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(slot_hamiltonian(p, amps, k));
    vecs[k] = es.eigenvectors();
    vals[k] = es.eigenvalues();
    Eigen::VectorXcd ph(d);
    for (Eigen::Index a = 0; a < d; ++a) ph[a] = std::exp(cplx(0.0, -vals[k][a] * dt));
    u[k] = vecs[k] * ph.asDiagonal() * vecs[k].adjoint();
  }
  // fwd[k] = U_k ... U_1 (fwd[0] = I); bwd[k] = U_n ... U_{k+1} (bwd[n] = I).
  std::vector<Matrix> fwd(n + 1);
  std::vector<Matrix> bwd(n + 1);
  fwd[0] = Matrix::Identity(d, d);
  for (int k = 0; k < n; ++k) fwd[k + 1] = u[k] * fwd[k];
  bwd[n] = Matrix::Identity(d, d);
  for (int k = n; k-- > 0;) bwd[k] = bwd[k + 1] * u[k];

  const Matrix tdag = p.target.adjoint();
  const cplx g = (tdag * fwd[n]).trace();
  const double ag = std::abs(g);
  const double infid = 1.0 - ag / static_cast<double>(d);
  if (!grad) return infid;

  grad->setZero(n, nc);
  const cplx phase = ag > 1e-300 ? std::conj(g) / ag : cplx(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    const Matrix& v = vecs[k];
    const Matrix m = v.adjoint() * (fwd[k] * tdag * bwd[k + 1]) * v;
    Matrix gk(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        const double y = (vals[k][a] - vals[k][b]) * dt / 2.0;
        const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
        gk(a, b) = std::exp(cplx(0.0, -(vals[k][a] + vals[k][b]) * dt / 2.0)) * sinc;
      }
    // Tr(M (X o G)) = sum_ab M_ba X_ab G_ab, with X = V^dag (-i dt H_j) V.
    const Matrix mg = m.transpose().cwiseProduct(gk);
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Matrix x = v.adjoint() * p.controls[j] * v * cplx(0.0, -dt);
      const cplx dg = mg.cwiseProduct(x).sum();
      (*grad)(k, j) = -std::real(phase * dg) / static_cast<double>(d);
    }
  }
  return infid;
}

double evaluate_infidelity(const GrapeProblem& p, const MatrixXd& amps) {
  validate(p);
  const double dt = p.evo_time / p.n_ts;
  const Eigen::Index d = p.target.rows();
  Matrix u = Matrix::Identity(d, d);
  for (int k = 0; k < p.n_ts; ++k) u = linalg::expm(slot_hamiltonian(p, amps, k) * cplx(0.0, -dt)) * u;
  return 1.0 - std::abs((p.target.adjoint() * u).trace()) / static_cast<double>(d);
}

GrapeResult grape_optimize(const GrapeProblem& p) {
  validate(p);
  const int n = p.n_ts;
  const int nc = static_cast<int>(p.controls.size());
  const int nv = n * nc;
  VectorXd lo(nv);
  VectorXd hi(nv);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < nc; ++j) {
      const double b = bound_of(p, static_cast<std::size_t>(j));
      if (!(b > 0.0)) throw std::invalid_argument("amplitude bounds must be positive");
      lo[k * nc + j] = -b;
      hi[k * nc + j] = b;
    }
  auto project = [&](VectorXd x) {
    for (int i = 0; i < nv; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };

  VectorXd x(nv);
  if (p.init_amps) {
    if (p.init_amps->rows() != n || p.init_amps->cols() != nc)
      throw std::invalid_argument("initial amplitudes must be n_ts x n_controls");
    x = to_vec(*p.init_amps);
  } else if (p.init == InitAmps::Random) {
    std::mt19937_64 rng(p.seed);
    for (int i = 0; i < nv; ++i) {
      const double b = std::isfinite(hi[i]) ? hi[i] : 1.0;
      x[i] = std::uniform_real_distribution<double>(-b, b)(rng);
    }
  } else {
    x.setConstant(p.init == InitAmps::Constant ? p.init_value : 0.0);
  }
  x = project(x);

  MatrixXd gm;
  auto eval = [&](const VectorXd& v, VectorXd& grad) {
    const double f = grape_infidelity(p, to_amps(v, n, nc), &gm);
    grad = to_vec(gm);
    return f;
  };

  GrapeResult res;
  VectorXd g;
  double f = eval(x, g);
  res.history.push_back(f);

  constexpr std::size_t kMemory = 10;
  std::deque<std::pair<VectorXd, VectorXd>> mem;
  // Variables pinned at a bound with the gradient pushing outward.
  auto active = [&](const VectorXd& v, const VectorXd& gr) {
    std::vector<bool> a(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i) a[i] = (v[i] <= lo[i] && gr[i] > 0.0) || (v[i] >= hi[i] && gr[i] < 0.0);
    return a;
  };

  while (res.iterations < p.max_iters && f > p.fid_goal) {
    const auto act = active(x, g);
    VectorXd pg = g;
    for (int i = 0; i < nv; ++i)
      if (act[i]) pg[i] = 0.0;
    if (pg.lpNorm<Eigen::Infinity>() < 1e-14) break;

    // Two-loop recursion on the free variables.
    VectorXd q = pg;
    std::vector<double> alpha(mem.size());
    for (std::size_t i = mem.size(); i-- > 0;) {
      const auto& [s, y] = mem[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!mem.empty()) q *= mem.back().first.dot(mem.back().second) / mem.back().second.squaredNorm();
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    VectorXd dir = -q;
    for (int i = 0; i < nv; ++i)
      if (act[i]) dir[i] = 0.0;
    if (dir.dot(pg) >= 0.0) {
      dir = -pg;
      mem.clear();
    }

    double step = mem.empty() ? std::min(1.0, 0.1 / pg.lpNorm<Eigen::Infinity>()) : 1.0;
    bool accepted = false;
    VectorXd xn;
    VectorXd gn;
    double fn = f;
    for (int ls = 0; ls < 40; ++ls) {
      xn = project(x + step * dir);
      fn = eval(xn, gn);
      if (fn <= f + 1e-4 * g.dot(xn - x) && fn < f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (mem.empty()) break;
      mem.clear();
      continue;
    }
    const VectorXd s = xn - x;
    const VectorXd y = gn - g;
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      mem.emplace_back(s, y);
      if (mem.size() > kMemory) mem.pop_front();
    }
    x = xn;
    g = gn;
    f = fn;
    ++res.iterations;
    res.history.push_back(f);
  }
  res.amplitudes = to_amps(x, n, nc);
  res.infidelity = f;
  res.converged = f <= p.fid_goal;
  return res;
}

OptCtrlResult load_circuit_optctrl(const QubitCircuit& circ, const HardwareModel& model, const OptCtrlOptions& o) {
  const int nq = model.num_qubits();
  if (circ.num_qubits() > nq) throw std::invalid_argument("circuit has more qubits than the model");
  for (int j = 0; j < model.dims().num_subsystems(); ++j)
    if (model.dims()[j] != 2 || model.dims().num_subsystems() != nq)
      throw std::invalid_argument("optimal control needs a register of qubits only");

  const std::vector<std::string> labels = o.labels.empty() ? model.control_labels() : o.labels;
  std::vector<Matrix> ctrls;
  std::vector<double> bounds;
  double lim1 = std::numeric_limits<double>::infinity();
  double lim2 = std::numeric_limits<double>::infinity();
  for (const std::string& l : labels) {
    const Control& c = model.get_control(l);
    ctrls.push_back(expand_matrix(c.op.matrix(), c.targets, model.dims()));
    const double b = std::isfinite(c.limit) ? c.limit : o.amp_bound;
    bounds.push_back(b);
    if (std::isfinite(b)) (c.targets.size() == 1 ? lim1 : lim2) = std::min(c.targets.size() == 1 ? lim1 : lim2, b);
  }
  const double t1 = o.evo_time_1q > 0 ? o.evo_time_1q : (std::isfinite(lim1) ? 1.0 / (2.0 * lim1) : 1.0);
  const double t2 = o.evo_time_2q > 0 ? o.evo_time_2q : (std::isfinite(lim2) ? 1.0 / lim2 : 2.0 * t1);

  Matrix drift = Matrix::Zero(model.dims().total(), model.dims().total());
  for (const Term& d : model.drift()) drift += expand_matrix(d.op.matrix(), d.targets, model.dims());

  QubitCircuit padded(nq);
  for (const auto& [name, def] : circ.custom_gates()) padded.register_gate(name, def);
  padded.add_gates(circ.gates());

  OptCtrlResult res;
  res.program = empty_program(model);
  std::vector<std::vector<double>> tl(labels.size(), std::vector<double>{0.0});
  std::vector<std::vector<double>> cl(labels.size());
  double t = 0.0;
  std::uint64_t index = 0;
  for (const Gate& gate : padded.gates()) {
    if (gate.name == "GLOBALPHASE") continue;
    GrapeProblem p;
    p.drift = drift;
    p.controls = ctrls;
    p.target = gate_unitary(gate, nq, padded.custom_gates()).matrix();
    const bool one = gate.qubits().size() == 1;
    p.n_ts = one ? o.n_ts_1q : o.n_ts_2q;
    p.evo_time = one ? t1 : t2;
    p.amp_bounds = bounds;
    p.seed = o.seed + index++;
    p.fid_goal = o.fid_goal;
    p.max_iters = o.max_iters;
    const GrapeResult r = grape_optimize(p);
    res.gate_infidelities.push_back(r.infidelity);
    res.all_converged = res.all_converged && r.converged;
    const double dt = p.evo_time / p.n_ts;
    for (int k = 0; k < p.n_ts; ++k) {
      const double tk = t + (k + 1) * dt;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        tl[j].push_back(tk);
        cl[j].push_back(r.amplitudes(k, static_cast<Eigen::Index>(j)));
      }
    }
    t += p.evo_time;
  }
  for (std::size_t j = 0; j < labels.size() && t > 0.0; ++j) {
    const Control& c = model.get_control(labels[j]);
    res.program.pulses.emplace_back(c.op, c.targets, ControlCoefficient::step(tl[j], cl[j]), labels[j]);
  }
  res.program.total_time = t;
  return res;
}

}  // namespace pulsesim
