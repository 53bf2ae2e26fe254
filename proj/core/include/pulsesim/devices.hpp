#pragma once

#include <memory>

#include "pulsesim/compiler.hpp"
#include "pulsesim/model.hpp"

namespace pulsesim {

// ---------------------------------------------------------------- spin chain

enum class Boundary { Open, Closed };

struct SpinChainParams {
  double sx = 0.25;
  double sz = 1.0;
  double sxsy = 0.1;
  Boundary boundary = Boundary::Open;
};

/// Controls sx_j = 2 pi X_j, sz_j = 2 pi Z_j and g_j = 2 pi (XX + YY) on
/// (j, j+1); a closed chain adds g_{N-1} on (N-1, 0).
class SpinChainModel : public HardwareModel {
 public:
  explicit SpinChainModel(int num_qubits, SpinChainParams params = {});
  const SpinChainParams& chain_params() const { return p_; }
  std::unique_ptr<GateCompiler> make_compiler() const override;

 private:
  SpinChainParams p_;
};

/// Square pulses: RX on sx, RZ on sz, ISWAP on g.
class SpinChainCompiler : public GateCompiler {
 public:
  explicit SpinChainCompiler(const SpinChainModel& model) : model_(&model) {}
  GateSegment compile_gate(const Gate& g) const override;

 private:
  const SpinChainModel* model_;
};

HamiltonianProgram compile_spinchain(const QubitCircuit& circ, const SpinChainModel& model,
                                     const CompileOptions& options = {});

// ---------------------------------------------------------------- superconducting

struct SCQubitsParams {
  int levels = 3;
  double alpha = -300.0;
  double omega_max = 20.0;
  /// Peak cross-resonance amplitude.
  double cr_strength = 1.25;
  /// Single-qubit gate duration.
  double gate_time = 0.2;
  /// Always-on ZZ between neighbours; zero disables it.
  double zz_crosstalk = 0.0;
  int samples = 51;
};

/// Duffing transmons. sx_j = 2 pi (a + a^dag), sy_j = 2 pi i (a^dag - a),
/// cr1_j = 2 pi Z_j X_{j+1} and cr2_j = 2 pi X_j Z_{j+1} on the qubit levels.
class SCQubitsModel : public HardwareModel {
 public:
  explicit SCQubitsModel(int num_qubits, SCQubitsParams params = {});
  const SCQubitsParams& sc_params() const { return p_; }
  std::unique_ptr<GateCompiler> make_compiler() const override;

 private:
  SCQubitsParams p_;
};

/// Gaussian pulses sampled as cubic coefficients.
class SCQubitsCompiler : public GateCompiler {
 public:
  explicit SCQubitsCompiler(const SCQubitsModel& model) : model_(&model) {}
  GateSegment compile_gate(const Gate& g) const override;

 private:
  GateSegment single(const std::string& label, double theta, double t0) const;
  const SCQubitsModel* model_;
};

HamiltonianProgram compile_scqubits(const QubitCircuit& circ, const SCQubitsModel& model,
                                    const CompileOptions& options = {});

/// Truncated Gaussian with its pedestal removed and unit area on [0, T].
double gaussian_envelope(double t, double duration);

// ---------------------------------------------------------------- cavity QED

struct CavityQEDParams {
  int levels = 10;
  /// Resonator detuning from the qubits.
  double delta = 10.0;
  double g = 0.5;
  double sx = 0.25;
  double sy = 0.25;
  /// Rise and fall time of the coupling pulse.
  double ramp = 0.5;
  int samples = 401;
};

/// N qubits and a resonator (last subsystem). Drift 2 pi delta a^dag a;
/// controls sx_j = 2 pi X_j, sy_j = 2 pi Y_j, g_j = 2 pi (a^dag s-_j + a s+_j).
class CavityQEDModel : public HardwareModel {
 public:
  explicit CavityQEDModel(int num_qubits, CavityQEDParams params = {});
  const CavityQEDParams& cavity_params() const { return p_; }
  std::unique_ptr<GateCompiler> make_compiler() const override;

 private:
  CavityQEDParams p_;
};

/// ISWAP by dispersive resonator-mediated exchange.
class CavityQEDCompiler : public GateCompiler {
 public:
  explicit CavityQEDCompiler(const CavityQEDModel& model) : model_(&model) {}
  GateSegment compile_gate(const Gate& g) const override;

 private:
  const CavityQEDModel* model_;
};

HamiltonianProgram compile_cavityqed(const QubitCircuit& circ, const CavityQEDModel& model,
                                     const CompileOptions& options = {});

}  // namespace pulsesim
