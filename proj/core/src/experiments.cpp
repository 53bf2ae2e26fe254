#include "pulsesim/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pulsesim/parallel.hpp"

namespace pulsesim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Fastest of five batches, each repeating fn for at least min_seconds.
template <class F>
double best_time(double min_seconds, F&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int batch = 0; batch < 5; ++batch) {
    int reps = 0;
    const auto t0 = std::chrono::steady_clock::now();
    do {
      fn();
      ++reps;
    } while (seconds_since(t0) < min_seconds);
    best = std::min(best, seconds_since(t0) / reps);
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------- cross-talk

std::shared_ptr<HardwareModel> crosstalk_model(double delta) {
  auto m = std::make_shared<HardwareModel>(2, Dims::qubits(2));
  for (int j = 0; j < 2; ++j) {
    m->add_control("sx" + std::to_string(j), sigmax() * (kTwoPi / 2.0), {j});
    m->add_control("sy" + std::to_string(j), sigmay() * (kTwoPi / 2.0), {j});
  }
  m->add_drift(sigmaz() * (kTwoPi * delta / 2.0), {1});
  m->set_param("delta", delta);
  return m;
}

HamiltonianProgram random_phase_program(const HardwareModel& model, const std::vector<double>& phases, double rabi) {
  if (!(rabi > 0.0)) throw std::invalid_argument("rabi frequency must be positive");
  const double t_pi = 1.0 / (2.0 * rabi);
  const std::size_t n = phases.size();
  HamiltonianProgram p = empty_program(model);
  p.total_time = t_pi * static_cast<double>(n);
  if (n == 0) return p;
  std::vector<double> t(n + 1);
  std::vector<double> cx(n);
  std::vector<double> cy(n);
  for (std::size_t i = 0; i <= n; ++i) t[i] = t_pi * static_cast<double>(i);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = rabi * std::cos(phases[i]);
    cy[i] = rabi * std::sin(phases[i]);
  }
  const Control& sx = model.get_control("sx0");
  const Control& sy = model.get_control("sy0");
  p.pulses.emplace_back(sx.op, sx.targets, ControlCoefficient::step(t, std::move(cx)), "sx0");
  p.pulses.emplace_back(sy.op, sy.targets, ControlCoefficient::step(t, std::move(cy)), "sy0");
  return p;
}

std::vector<CrosstalkPoint> run_crosstalk(const CrosstalkParams& p) {
  if (p.reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (p.max_pulses < 0 || p.stride < 1) throw std::invalid_argument("pulse counts must be non-negative with stride >= 1");
  if (!(p.init_fidelity >= 0.0 && p.init_fidelity <= 1.0)) throw std::invalid_argument("initial fidelity must be in [0, 1]");
  if (!std::isfinite(p.lambda) || !std::isfinite(p.delta)) throw std::invalid_argument("lambda and delta must be finite");

  std::vector<int> counts;
  for (int k = 0; k <= p.max_pulses; k += p.stride) counts.push_back(k);
  const auto model = crosstalk_model(p.delta);
  const double t_pi = 1.0 / (2.0 * p.rabi);

  Matrix rho0 = Matrix::Zero(4, 4);
  rho0(0, 0) = p.init_fidelity;
  rho0(1, 1) = 1.0 - p.init_fidelity;

  // fid[rep][k] for counts[k]
  std::vector<std::vector<double>> fid(static_cast<std::size_t>(p.reps), std::vector<double>(counts.size()));
  auto run_one = [&](int rep) {
    std::mt19937_64 rng(p.seed + static_cast<std::uint64_t>(rep));
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<double> phases(static_cast<std::size_t>(p.max_pulses));
    for (double& v : phases) v = phase(rng);

    Processor proc(model);
    proc.set_program(random_phase_program(*model, phases, p.rabi));
    if (p.lambda != 0.0) proc.add_noise(classical_crosstalk(p.lambda));
    const OpenSystem sys = proc.system(true);

    Matrix u = Matrix::Identity(4, 4);
    double t = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const double t_next = t_pi * counts[k];
      u = propagate_stepwise(sys, u, t, t_next);
      t = t_next;
      const QuantumState rho = QuantumState::density(u * rho0 * u.adjoint(), Dims::qubits(2));
      fid[static_cast<std::size_t>(rep)][k] = ptrace(rho, {1}).data()(0, 0).real();
    }
  };
  parallel_for(p.reps, resolve_workers(p.threads, p.reps), run_one);

  std::vector<CrosstalkPoint> rows;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double mean = 0.0;
    for (const auto& f : fid) mean += f[k];
    mean /= p.reps;
    double var = 0.0;
    for (const auto& f : fid) var += (f[k] - mean) * (f[k] - mean);
    const double se = p.reps > 1 ? std::sqrt(var / (p.reps - 1) / p.reps) : 0.0;
    rows.push_back({counts[k], mean, se});
  }
  return rows;
}

void write_crosstalk_csv(std::ostream& os, const std::vector<CrosstalkPoint>& rows) {
  os << "pulse_count,mean_fidelity,stderr\n";
  for (const auto& r : rows) os << r.pulses << ',' << fmt(r.mean_fidelity) << ',' << fmt(r.stderr_fidelity) << '\n';
}

// ---------------------------------------------------------------- Ramsey

RamseyResult run_ramsey(const RamseyParams& p, const SolverOptions& options) {
  if (!(p.amp > 0.0) || !(p.t2 > 0.0) || !std::isfinite(p.f)) throw std::invalid_argument("Ramsey needs amp > 0, t2 > 0, finite f");
  if (p.points < 2 || !(p.t_max > 0.0)) throw std::invalid_argument("Ramsey needs t_max > 0 and at least 2 points");

  const Operator h_idle = sigmaz() * (kTwoPi * p.f / 2.0);
  auto model = std::make_shared<HardwareModel>(1, Dims::qubits(1));
  model->add_drift(h_idle, {0});
  // amp * sx0 + h_idle = 2 pi amp sigma_x
  model->add_control("sx0", sigmax() * kTwoPi - h_idle * (1.0 / p.amp), {0});

  RamseyResult r;
  r.pulse_time = 1.0 / (8.0 * p.amp);
  const double tp = r.pulse_time;
  Processor proc(model, std::nullopt, p.t2);
  SolverOptions opts = options;
  opts.store_states = false;
  for (int i = 0; i < p.points; ++i) {
    const double idle = p.t_max * i / (p.points - 1);
    std::vector<double> t;
    std::vector<double> c;
    if (idle > 0.0) {
      t = {0.0, tp, tp + idle, 2.0 * tp + idle};
      c = {p.amp, 0.0, p.amp};
    } else {
      t = {0.0, 2.0 * tp};
      c = {p.amp};
    }
    proc.set_coefficients({{"sx0", {t, c}}});
    const SolverResult res = proc.run_state(basis(2, 1), SolverKind::Mesolve, {0.0, t.back()}, {sigmaz()}, opts);
    r.idle.push_back(idle);
    r.sz.push_back(res.expect[0].back());
  }
  r.fit = fit_damped_cosine(r.idle, r.sz, guess_damped_cosine(r.idle, r.sz));
  return r;
}

void write_ramsey_csv(std::ostream& os, const RamseyResult& r) {
  os << "idle_time,sigma_z,fit\n";
  for (std::size_t i = 0; i < r.idle.size(); ++i)
    os << fmt(r.idle[i]) << ',' << fmt(r.sz[i]) << ',' << fmt(r.fit.params(r.idle[i])) << '\n';
}

// ---------------------------------------------------------------- QFT timing

std::vector<QftRow> run_qft_bench(int max_qubits, double min_seconds, const SolverOptions& options) {
  if (max_qubits < 1) throw std::invalid_argument("max_qubits must be at least 1");
  SolverOptions opts = options;
  opts.store_states = false;
  std::vector<QftRow> rows;
  for (int n = 1; n <= max_qubits; ++n) {
    const QubitCircuit qc = qft_circuit(n);
    Processor proc = linear_spin_chain(n);

    const double compile = best_time(min_seconds, [&] { proc.load_circuit(qc); });
    const QuantumState psi0 = basis(Dims::qubits(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    SolverResult res;
    const double solve = best_time(min_seconds, [&] { res = proc.run_state(psi0, SolverKind::Sesolve, {}, {}, opts); });

    const double fid = state_fidelity(res.final_state, run_gate_level(qc, psi0));
    rows.push_back({n, compile, solve, fid});
  }
  return rows;
}

void write_qft_csv(std::ostream& os, const std::vector<QftRow>& rows) {
  os << "n,compile_seconds,solve_seconds,fidelity\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.compile_seconds) << ',' << fmt(r.solve_seconds) << ',' << fmt(r.fidelity) << '\n';
}

}  // namespace pulsesim
