#include "pulsesim/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pulsesim {

namespace {

void check_times(const CoherenceTimes& t, const char* name) {
  for (const auto& v : t)
    if (v && !(*v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

std::optional<double> at(const CoherenceTimes& t, std::size_t j) { return j < t.size() ? t[j] : std::nullopt; }

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != cplx(0.0)) return false;
  return true;
}

}  // namespace

CoherenceTimes uniform_times(int n, std::optional<double> value) {
  return CoherenceTimes(static_cast<std::size_t>(n), value);
}

DecoherenceSpec DecoherenceSpec::uniform(int num_qubits, std::optional<double> t1, std::optional<double> t2) {
  DecoherenceSpec s;
  s.t1 = uniform_times(num_qubits, t1);
  s.t2 = uniform_times(num_qubits, t2);
  return s;
}

bool DecoherenceSpec::empty() const {
  for (const auto& v : t1)
    if (v) return false;
  for (const auto& v : t2)
    if (v) return false;
  return custom.empty();
}

std::vector<Term> relaxation_ops(const CoherenceTimes& t1, const Dims& dims) {
  check_times(t1, "t1");
  if (static_cast<int>(t1.size()) > dims.num_subsystems()) throw std::invalid_argument("more t1 values than subsystems");
  std::vector<Term> out;
  for (std::size_t j = 0; j < t1.size(); ++j)
    if (t1[j] && std::isfinite(*t1[j]))
      out.push_back({destroy(dims[static_cast<int>(j)]) * (1.0 / std::sqrt(*t1[j])), {static_cast<int>(j)}, std::nullopt});
  return out;
}

std::vector<Term> dephasing_ops(const CoherenceTimes& t1, const CoherenceTimes& t2, const Dims& dims) {
  check_times(t1, "t1");
  check_times(t2, "t2");
  if (static_cast<int>(t2.size()) > dims.num_subsystems()) throw std::invalid_argument("more t2 values than subsystems");
  std::vector<Term> out;
  for (std::size_t j = 0; j < t2.size(); ++j) {
    if (!t2[j]) continue;
    const auto r1 = at(t1, j);
    double rate = 1.0 / *t2[j];
    if (r1) {
      if (*t2[j] > 2.0 * *r1 * (1.0 + 1e-12)) throw std::invalid_argument("t2 must not exceed 2 t1");
      rate -= 1.0 / (2.0 * *r1);
    }
    if (rate <= 0.0) continue;
    out.push_back({num(dims[static_cast<int>(j)]) * std::sqrt(2.0 * rate), {static_cast<int>(j)}, std::nullopt});
  }
  return out;
}

DecoherenceNoise::DecoherenceNoise(DecoherenceSpec spec) : spec_(std::move(spec)) {
  check_times(spec_.t1, "t1");
  check_times(spec_.t2, "t2");
  for (std::size_t j = 0; j < spec_.t2.size(); ++j) {
    const auto a = at(spec_.t1, j);
    if (a && spec_.t2[j] && *spec_.t2[j] > 2.0 * *a * (1.0 + 1e-12))
      throw std::invalid_argument("t2 must not exceed 2 t1");
  }
}

void DecoherenceNoise::apply(const HamiltonianProgram& ideal, int, NoiseElements& out) const {
  for (auto& t : relaxation_ops(spec_.t1, ideal.dims)) out.c_ops.push_back(std::move(t));
  for (auto& t : dephasing_ops(spec_.t1, spec_.t2, ideal.dims)) out.c_ops.push_back(std::move(t));
  for (const auto& t : spec_.custom) out.c_ops.push_back(t);
}

ClassicalCrosstalk::ClassicalCrosstalk(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("cross-talk ratio must be non-negative");
}

void ClassicalCrosstalk::apply(const HamiltonianProgram& ideal, int num_qubits, NoiseElements& out) const {
  if (lambda_ == 0.0) return;
  for (std::size_t k = 0; k < ideal.pulses.size(); ++k) {
    const Pulse& p = ideal.pulses[k];
    if (p.targets().size() != 1 || is_diagonal(p.op().matrix())) continue;
    const int j = p.targets()[0];
    if (j >= num_qubits) continue;
    for (int nb : {j - 1, j + 1}) {
      if (nb < 0 || nb >= num_qubits || ideal.dims[nb] != ideal.dims[j]) continue;
      out.control_noise[k].push_back({p.op(), {nb}, p.coeff().scaled(lambda_)});
    }
  }
}

RandomAmplitudeNoise::RandomAmplitudeNoise(double stddev, double dt, std::uint64_t seed)
    : stddev_(stddev), dt_(dt), seed_(seed) {
  if (!(stddev >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("noise stddev must be >= 0 and dt > 0");
}

void RandomAmplitudeNoise::apply(const HamiltonianProgram& ideal, int, NoiseElements& out) const {
  std::mt19937_64 rng(seed_);
  std::normal_distribution<double> nd(0.0, stddev_);
  for (std::size_t k = 0; k < ideal.pulses.size(); ++k) {
    const Pulse& p = ideal.pulses[k];
    if (p.coeff().empty()) continue;
    const double a = p.coeff().start();
    const double b = p.coeff().end();
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / dt_ - 1e-9)));
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i <= n; ++i) t[i] = std::min(b, a + i * dt_);
    t.back() = b;
    for (auto& v : c) v = nd(rng);
    out.control_noise[k].push_back({p.op(), p.targets(), ControlCoefficient::step(std::move(t), std::move(c))});
  }
}

std::shared_ptr<const NoiseModel> classical_crosstalk(double lambda) {
  return std::make_shared<ClassicalCrosstalk>(lambda);
}

HamiltonianProgram apply_noise_models(const HamiltonianProgram& ideal,
                                      const std::vector<std::shared_ptr<const NoiseModel>>& models, int num_qubits) {
  HamiltonianProgram noisy = ideal;
  if (models.empty()) return noisy;
  NoiseElements el;
  el.control_noise.resize(ideal.pulses.size());
  el.lindblad_noise.resize(ideal.pulses.size());
  for (const auto& m : models) m->apply(ideal, num_qubits, el);
  for (std::size_t k = 0; k < noisy.pulses.size(); ++k) {
    for (auto& t : el.control_noise[k]) {
      if (!t.coeff) throw std::invalid_argument("control noise needs a coefficient");
      noisy.pulses[k].add_control_noise(std::move(t.op), std::move(t.targets), *t.coeff);
    }
    for (auto& t : el.lindblad_noise[k]) noisy.pulses[k].add_lindblad_noise(std::move(t.op), std::move(t.targets), t.coeff);
  }
  for (auto& t : el.c_ops) noisy.c_ops.push_back(std::move(t));
  for (auto& t : el.drift) noisy.drift.push_back(std::move(t));
  return noisy;
}

}  // namespace pulsesim
