#include "pulsesim/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "pulsesim/integrator.hpp"
#include "pulsesim/linalg.hpp"
#include "pulsesim/parallel.hpp"

namespace pulsesim {

namespace {


/// H(t), or H(t) - i/2 sum_n w_n(t)^2 C_n^dag C_n; rebuilt only when a
/// coefficient value changes.
class HamCache {
 public:
  HamCache(const OpenSystem& sys, bool effective) : sys_(&sys), effective_(effective) {
    if (effective_)
      for (const auto& c : sys.c_ops) cdc_.push_back(SparseMatrix(c.op.adjoint() * c.op));
  }

  const SparseMatrix& at(double t, bool left) {
    const TdOperator& h = sys_->hamiltonian;
    scratch_.clear();
    for (std::size_t k = 0; k < h.num_terms(); ++k) scratch_.push_back(h.term_coeff(k, t, left));
    if (effective_)
      for (const auto& c : sys_->c_ops) {
        const double w = c.weight(t, left);
        scratch_.push_back(w * w);
      }
    if (valid_ && scratch_ == last_) return h_;
    last_ = scratch_;
    valid_ = true;
    h_ = h.constant();
    for (std::size_t k = 0; k < h.num_terms(); ++k)
      if (last_[k] != 0.0) h_ += h.term_matrix(k) * cplx(last_[k], 0.0);
    if (effective_)
      for (std::size_t n = 0; n < cdc_.size(); ++n) {
        const double w2 = last_[h.num_terms() + n];
        if (w2 != 0.0) h_ += cdc_[n] * cplx(0.0, -0.5 * w2);
      }
    return h_;
  }

 private:
  const OpenSystem* sys_;
  bool effective_;
  std::vector<SparseMatrix> cdc_;
  std::vector<double> scratch_, last_;
  bool valid_ = false;
  SparseMatrix h_;
};

/// Smooth piece [a, b) between knots; stages past its midpoint take left limits.
struct Piece {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  bool left(double t) const { return std::isfinite(b) && t > 0.5 * (a + b); }
};

ode::Options ode_options(const SolverOptions& o) {
  ode::Options r;
  r.rtol = o.rtol;
  r.atol = o.atol;
  if (o.max_step) r.max_step = *o.max_step;
  return r;
}

std::vector<double> resolve_tlist(std::vector<double> tlist, const OpenSystem& sys) {
  if (tlist.empty()) tlist = {0.0, sys.total_time};
  if (tlist.size() == 2 && tlist[0] == tlist[1]) tlist.pop_back();
  for (std::size_t i = 0; i < tlist.size(); ++i) {
    if (!std::isfinite(tlist[i])) throw std::invalid_argument("tlist must be finite");
    if (i > 0 && !(tlist[i] > tlist[i - 1])) throw std::invalid_argument("tlist must be strictly increasing");
  }
  return tlist;
}

struct Event {
  double time;
  bool knot;
  int output;  // -1 when not an output time
};

std::vector<Event> make_events(const std::vector<double>& tlist, const std::vector<double>& knots) {
  constexpr double eps = 1e-12;
  std::vector<Event> ev;
  for (std::size_t i = 1; i < tlist.size(); ++i) ev.push_back({tlist[i], false, static_cast<int>(i)});
  for (double k : knots) {
    if (!(k > tlist.front() + eps) || !(k < tlist.back() - eps)) continue;
    auto it = std::find_if(ev.begin(), ev.end(), [&](const Event& e) { return std::abs(e.time - k) <= eps; });
    if (it != ev.end())
      it->knot = true;
    else
      ev.push_back({k, true, -1});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.time < y.time; });
  return ev;
}

double next_knot(const std::vector<Event>& ev, std::size_t from) {
  for (std::size_t i = from; i < ev.size(); ++i)
    if (ev[i].knot) return ev[i].time;
  return std::numeric_limits<double>::infinity();
}

/// Integrates across all events. record(i, y) at output i; after_step(dp) may
/// reset the integrator (a quantum jump).
template <class Record, class AfterStep>
void drive(ode::DormandPrince& dp, Piece& piece, const std::vector<double>& tlist, const std::vector<double>& knots,
           const Matrix& y0, Record&& record, AfterStep&& after_step) {
  const std::vector<Event> ev = make_events(tlist, knots);
  piece.a = tlist.front();
  piece.b = next_knot(ev, 0);
  record(0, y0);
  if (ev.empty()) return;
  dp.reset(tlist.front(), y0);
  for (std::size_t e = 0; e < ev.size(); ++e) {
    const double target = ev[e].time;
    while (dp.t() < target) {
      dp.step(target);
      after_step(dp);
    }
    if (ev[e].output >= 0) record(ev[e].output, dp.y());
    if (ev[e].knot) {
      piece.a = target;
      piece.b = next_knot(ev, e + 1);
      dp.reset(target, dp.y());
    }
  }
}

void check_dims(const OpenSystem& sys, const QuantumState& s) {
  if (s.dim() != sys.hamiltonian.dim()) throw std::invalid_argument("state dimension does not match the system");
  if (sys.dims.num_subsystems() > 0 && s.dims() != sys.dims)
    throw std::invalid_argument("state dims do not match the system dims");
}

std::vector<Matrix> dense_ops(const std::vector<Operator>& e_ops, long dim) {
  std::vector<Matrix> out;
  for (const auto& o : e_ops) {
    if (o.dim() != dim) throw std::invalid_argument("e_op dimension does not match the system");
    out.push_back(o.matrix());
  }
  return out;
}

double ket_expect(const Matrix& op, const Matrix& psi) {
  const cplx num = (psi.adjoint() * op * psi)(0, 0);
  return num.real() / psi.squaredNorm();
}

double rho_expect(const Matrix& op, const Matrix& rho) { return (op * rho).trace().real(); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

OpenSystem constant_system(const Operator& h, const std::vector<Operator>& c_ops) {
  OpenSystem sys;
  sys.dims = h.dims();
  sys.hamiltonian = TdOperator(h.dim());
  sys.hamiltonian.add_constant(h.matrix().sparseView());
  for (const auto& c : c_ops) {
    if (c.dim() != h.dim()) throw std::invalid_argument("collapse operator dimension does not match H");
    sys.c_ops.push_back({c.matrix().sparseView(), std::nullopt});
  }
  sys.knots = {0.0};
  return sys;
}

SolverResult sesolve(const OpenSystem& sys, const QuantumState& psi0, std::vector<double> tlist,
                     const std::vector<Operator>& e_ops, const SolverOptions& options) {
  if (!psi0.is_ket()) return mesolve(sys, psi0, std::move(tlist), e_ops, options);
  check_dims(sys, psi0);
  tlist = resolve_tlist(std::move(tlist), sys);
  const auto ops = dense_ops(e_ops, psi0.dim());
  HamCache cache(sys, false);
  Piece piece;
  ode::DormandPrince dp(
      [&](double t, const Matrix& y, Matrix& dy) { dy.noalias() = -kI * (cache.at(t, piece.left(t)) * y); },
      ode_options(options));

  SolverResult res;
  res.times = tlist;
  res.expect.assign(ops.size(), std::vector<double>(tlist.size()));
  if (options.store_states) res.states.resize(tlist.size());
  Matrix last;
  drive(
      dp, piece, tlist, sys.knots, psi0.data(),
      [&](int i, const Matrix& y) {
        for (std::size_t k = 0; k < ops.size(); ++k) res.expect[k][i] = ket_expect(ops[k], y);
        if (options.store_states) res.states[i] = QuantumState::ket(y.col(0), psi0.dims());
        last = y;
      },
      [](ode::DormandPrince&) {});
  res.final_state = QuantumState::ket(last.col(0), psi0.dims());
  return res;
}

Matrix propagate_unitary(const OpenSystem& sys, const Matrix& u0, double t0, double t1, const SolverOptions& options) {
  if (u0.rows() != sys.hamiltonian.dim()) throw std::invalid_argument("U0 dimension does not match the system");
  if (t1 < t0) throw std::invalid_argument("t1 must not precede t0");
  if (t1 == t0) return u0;
  HamCache cache(sys, false);
  Piece piece;
  ode::DormandPrince dp(
      [&](double t, const Matrix& y, Matrix& dy) { dy.noalias() = -kI * (cache.at(t, piece.left(t)) * y); },
      ode_options(options));
  Matrix out;
  drive(
      dp, piece, {t0, t1}, sys.knots, u0, [&](int, const Matrix& y) { out = y; }, [](ode::DormandPrince&) {});
  return out;
}

Matrix propagate_stepwise(const OpenSystem& sys, const Matrix& u0, double t0, double t1) {
  if (!sys.hamiltonian.piecewise_constant()) throw std::invalid_argument("stepwise propagation needs step coefficients");
  if (u0.rows() != sys.hamiltonian.dim()) throw std::invalid_argument("U0 dimension does not match the system");
  if (t1 < t0) throw std::invalid_argument("t1 must not precede t0");
  std::vector<double> cuts{t0};
  for (double k : sys.knots)
    if (k > t0 && k < t1) cuts.push_back(k);
  cuts.push_back(t1);
  Matrix u = u0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double dt = cuts[i + 1] - cuts[i];
    if (dt <= 0.0) continue;
    u = linalg::expm_hermitian(Matrix(sys.hamiltonian.at(0.5 * (cuts[i] + cuts[i + 1]))), dt) * u;
  }
  return u;
}

Matrix propagator(const OpenSystem& sys, const SolverOptions& options) {
  const long d = sys.hamiltonian.dim();
  return propagate_unitary(sys, Matrix::Identity(d, d), 0.0, sys.total_time, options);
}

SolverResult mesolve(const OpenSystem& sys, const QuantumState& rho0, std::vector<double> tlist,
                     const std::vector<Operator>& e_ops, const SolverOptions& options) {
  if (rho0.is_ket() && sys.c_ops.empty()) {
    SolverResult r = sesolve(sys, rho0, std::move(tlist), e_ops, options);
    for (auto& s : r.states) s = s.to_density();
    r.final_state = r.final_state.to_density();
    return r;
  }
  const QuantumState rho_init = rho0.to_density();
  check_dims(sys, rho_init);
  tlist = resolve_tlist(std::move(tlist), sys);
  const auto ops = dense_ops(e_ops, rho_init.dim());
  HamCache cache(sys, true);
  Piece piece;
  std::vector<double> w(sys.c_ops.size());
  Matrix x, cr;
  ode::DormandPrince dp(
      [&](double t, const Matrix& rho, Matrix& drho) {
        const bool left = piece.left(t);
        x.noalias() = -kI * (cache.at(t, left) * rho);
        drho = x + x.adjoint();
        for (std::size_t n = 0; n < sys.c_ops.size(); ++n) {
          const double wn = sys.c_ops[n].weight(t, left);
          if (wn == 0.0) continue;
          cr.noalias() = sys.c_ops[n].op * rho;
          drho.noalias() += (wn * wn) * (sys.c_ops[n].op * cr.adjoint());
        }
      },
      ode_options(options));

  SolverResult res;
  res.times = tlist;
  res.expect.assign(ops.size(), std::vector<double>(tlist.size()));
  if (options.store_states) res.states.resize(tlist.size());
  Matrix last;
  drive(
      dp, piece, tlist, sys.knots, rho_init.data(),
      [&](int i, const Matrix& y) {
        for (std::size_t k = 0; k < ops.size(); ++k) res.expect[k][i] = rho_expect(ops[k], y);
        if (options.store_states) res.states[i] = QuantumState::density(y, rho_init.dims());
        last = y;
      },
      [](ode::DormandPrince&) {});
  res.final_state = QuantumState::density(last, rho_init.dims());
  return res;
}

SolverResult mcsolve(const OpenSystem& sys, const QuantumState& psi0, std::vector<double> tlist,
                     const std::vector<Operator>& e_ops, const SolverOptions& options) {
  if (!psi0.is_ket()) throw std::invalid_argument("mcsolve needs a ket initial state");
  if (options.ntraj < 1) throw std::invalid_argument("ntraj must be at least 1");
  check_dims(sys, psi0);
  tlist = resolve_tlist(std::move(tlist), sys);
  const auto ops = dense_ops(e_ops, psi0.dim());
  const std::size_t nt = tlist.size();
  const int ntraj = options.ntraj;

  struct Trajectory {
    std::vector<std::vector<double>> expect;  // [op][time]
    std::vector<Vector> states;               // normalized kets per time
    std::vector<JumpRecord> jumps;
    Vector last;
  };
  std::vector<Trajectory> traj(static_cast<std::size_t>(ntraj));

  auto run_one = [&](int index) {
    Trajectory& out = traj[static_cast<std::size_t>(index)];
    out.expect.assign(ops.size(), std::vector<double>(nt));
    if (options.store_states) out.states.resize(nt);
    std::mt19937_64 rng(splitmix(options.seed ^ splitmix(static_cast<std::uint64_t>(index))));
    auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };

    HamCache cache(sys, true);
    Piece piece;
    ode::DormandPrince dp(
        [&](double t, const Matrix& y, Matrix& dy) { dy.noalias() = -kI * (cache.at(t, piece.left(t)) * y); },
        ode_options(options));
    double target = uniform();
    const bool can_jump = !sys.c_ops.empty();

    auto after_step = [&](ode::DormandPrince& d) {
      if (!can_jump || d.y().squaredNorm() >= target) return;
      double lo = d.t_prev();
      double hi = d.t();
      while (hi - lo > 1e-6 * std::max(std::abs(hi), hi - d.t_prev())) {
        const double mid = 0.5 * (lo + hi);
        (d.dense(mid).squaredNorm() >= target ? lo : hi) = mid;
      }
      const double tj = 0.5 * (lo + hi);
      const Matrix psi = d.dense(tj);
      const bool left = piece.left(tj);
      std::vector<double> cum;
      std::vector<Matrix> jumped;
      double total = 0.0;
      for (const auto& c : sys.c_ops) {
        const double wn = c.weight(tj, left);
        jumped.push_back(c.op * psi);
        total += wn * wn * jumped.back().squaredNorm();
        cum.push_back(total);
      }
      if (!(total > 0.0)) {
        target = uniform();
        d.reset(tj, psi);
        return;
      }
      const double u = uniform() * total;
      const int ch = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      const int chan = std::min(ch, static_cast<int>(cum.size()) - 1);
      out.jumps.push_back({tj, chan});
      const Matrix next = jumped[static_cast<std::size_t>(chan)] / jumped[static_cast<std::size_t>(chan)].norm();
      target = uniform();
      d.reset(tj, next);
    };
    drive(
        dp, piece, tlist, sys.knots, psi0.data(),
        [&](int i, const Matrix& y) {
          for (std::size_t k = 0; k < ops.size(); ++k) out.expect[k][static_cast<std::size_t>(i)] = ket_expect(ops[k], y);
          if (options.store_states) out.states[static_cast<std::size_t>(i)] = y.col(0) / y.norm();
          out.last = y.col(0) / y.norm();
        },
        after_step);
  };

  parallel_for(ntraj, resolve_workers(options.threads, ntraj), run_one);

  SolverResult res;
  res.times = tlist;
  res.ntraj_used = ntraj;
  res.expect.assign(ops.size(), std::vector<double>(nt, 0.0));
  res.expect_stderr.assign(ops.size(), std::vector<double>(nt, 0.0));
  std::vector<std::vector<double>> sq(ops.size(), std::vector<double>(nt, 0.0));
  const long d = psi0.dim();
  std::vector<Matrix> rho;
  if (options.store_states) rho.assign(nt, Matrix::Zero(d, d));
  Matrix rho_final = Matrix::Zero(d, d);
  for (const Trajectory& tr : traj) {
    rho_final += tr.last * tr.last.adjoint();
    for (std::size_t k = 0; k < ops.size(); ++k)
      for (std::size_t i = 0; i < nt; ++i) {
        res.expect[k][i] += tr.expect[k][i];
        sq[k][i] += tr.expect[k][i] * tr.expect[k][i];
      }
    if (options.store_states)
      for (std::size_t i = 0; i < nt; ++i) rho[i] += tr.states[i] * tr.states[i].adjoint();
    res.jump_records.push_back(tr.jumps);
  }
  const double n = ntraj;
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (std::size_t i = 0; i < nt; ++i) {
      const double mean = res.expect[k][i] / n;
      res.expect[k][i] = mean;
      const double var = ntraj > 1 ? std::max(0.0, (sq[k][i] - n * mean * mean) / (n - 1)) : 0.0;
      res.expect_stderr[k][i] = std::sqrt(var / n);
    }
  if (options.store_states)
    for (std::size_t i = 0; i < nt; ++i) res.states.push_back(QuantumState::density(rho[i] / n, psi0.dims()));
  res.final_state = QuantumState::density(rho_final / n, psi0.dims());
  return res;
}

void write_expect_csv(std::ostream& os, const SolverResult& result, const std::vector<std::string>& names) {
  os << "time";
  for (std::size_t k = 0; k < result.expect.size(); ++k)
    os << ',' << (k < names.size() ? names[k] : "e" + std::to_string(k));
  os << '\n';
  char buf[40];
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", result.times[i]);
    os << buf;
    for (const auto& e : result.expect) {
      std::snprintf(buf, sizeof buf, "%.12g", e[i]);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace pulsesim
