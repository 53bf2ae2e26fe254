#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pulsesim/pulse.hpp"

namespace pulsesim {

/// Per-qubit coherence times in microseconds; nullopt means no decay.
using CoherenceTimes = std::vector<std::optional<double>>;

/// Broadcasts a scalar to n qubits.
CoherenceTimes uniform_times(int n, std::optional<double> value);

struct DecoherenceSpec {
  CoherenceTimes t1;
  CoherenceTimes t2;
  /// User collapse operators, constant or with a time-dependent coefficient.
  std::vector<Term> custom;

  static DecoherenceSpec uniform(int num_qubits, std::optional<double> t1, std::optional<double> t2);
  bool empty() const;
};

/// destroy(d_j) / sqrt(t1_j) on every qubit with a finite t1.
std::vector<Term> relaxation_ops(const CoherenceTimes& t1, const Dims& dims);

/// sqrt(2 / T2*) a^dag a with 1/T2* = 1/T2 - 1/(2 T1); omitted when the
/// pure dephasing rate is zero. Throws when T2 > 2 T1.
std::vector<Term> dephasing_ops(const CoherenceTimes& t1, const CoherenceTimes& t2, const Dims& dims);

enum class NoiseKind { Decoherence, Control, Custom };

/// Noise added on top of an ideal program.
struct NoiseElements {
  /// Indexed like the program's pulses.
  std::vector<std::vector<Term>> control_noise;
  std::vector<std::vector<Term>> lindblad_noise;
  std::vector<Term> c_ops;
  std::vector<Term> drift;
};

class NoiseModel {
 public:
  virtual ~NoiseModel() = default;
  virtual NoiseKind kind() const = 0;
  /// Appends to `out`, which is sized for `ideal.pulses`.
  virtual void apply(const HamiltonianProgram& ideal, int num_qubits, NoiseElements& out) const = 0;
};

class DecoherenceNoise : public NoiseModel {
 public:
  explicit DecoherenceNoise(DecoherenceSpec spec);
  NoiseKind kind() const override { return NoiseKind::Decoherence; }
  void apply(const HamiltonianProgram& ideal, int num_qubits, NoiseElements& out) const override;
  const DecoherenceSpec& spec() const { return spec_; }

 private:
  DecoherenceSpec spec_;
};

/// Copies every single-qubit drive pulse on qubit j to qubits j +- 1, scaled
/// by lambda. A drive is a pulse whose operator is not diagonal.
class ClassicalCrosstalk : public NoiseModel {
 public:
  explicit ClassicalCrosstalk(double lambda);
  NoiseKind kind() const override { return NoiseKind::Control; }
  void apply(const HamiltonianProgram& ideal, int num_qubits, NoiseElements& out) const override;
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// Gaussian amplitude noise: each pulse gets an extra step term with
/// independent N(0, stddev^2) values on a grid of spacing dt over its support.
class RandomAmplitudeNoise : public NoiseModel {
 public:
  RandomAmplitudeNoise(double stddev, double dt, std::uint64_t seed);
  NoiseKind kind() const override { return NoiseKind::Control; }
  void apply(const HamiltonianProgram& ideal, int num_qubits, NoiseElements& out) const override;

 private:
  double stddev_;
  double dt_;
  std::uint64_t seed_;
};

std::shared_ptr<const NoiseModel> classical_crosstalk(double lambda);

/// Fresh copy of `ideal` with every model applied in order.
HamiltonianProgram apply_noise_models(const HamiltonianProgram& ideal,
                                      const std::vector<std::shared_ptr<const NoiseModel>>& models, int num_qubits);

}  // namespace pulsesim
