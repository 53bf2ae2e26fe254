#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pulsesim/compiler.hpp"

namespace pulsesim {

enum class InitAmps { Random, Zero, Constant };

/// Piecewise-constant control problem: H_k = drift + sum_j c_{k,j} H_j on
/// slot k of length evo_time / n_ts.
struct GrapeProblem {
  Matrix drift;
  std::vector<Matrix> controls;
  Matrix target;
  int n_ts = 10;
  double evo_time = 1.0;
  double amp_bound = std::numeric_limits<double>::infinity();
  /// Per-control bounds; overrides amp_bound when non-empty.
  std::vector<double> amp_bounds;
  InitAmps init = InitAmps::Random;
  double init_value = 0.0;
  /// Explicit starting amplitudes (n_ts x n_controls); overrides `init`.
  std::optional<Eigen::MatrixXd> init_amps;
  std::uint64_t seed = 0;
  double fid_goal = 1e-4;
  int max_iters = 500;
};

struct GrapeResult {
  Eigen::MatrixXd amplitudes;
  double infidelity = 1.0;
  int iterations = 0;
  bool converged = false;
  /// Infidelity after every accepted iteration, starting with the initial point.
  std::vector<double> history;
};

/// 1 - |Tr(U_target^dag U)| / d and, when `grad` is given, its exact
/// gradient with respect to every amplitude.
double grape_infidelity(const GrapeProblem& p, const Eigen::MatrixXd& amps, Eigen::MatrixXd* grad = nullptr);

/// Same functional from a plain product of Pade exponentials.
double evaluate_infidelity(const GrapeProblem& p, const Eigen::MatrixXd& amps);

/// Bound-constrained L-BFGS minimization of the infidelity.
GrapeResult grape_optimize(const GrapeProblem& p);

struct OptCtrlOptions {
  int n_ts_1q = 10;
  int n_ts_2q = 20;
  /// Zero derives the time from the control limits.
  double evo_time_1q = 0.0;
  double evo_time_2q = 0.0;
  /// Used for controls with no finite model limit.
  double amp_bound = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  double fid_goal = 1e-4;
  int max_iters = 500;
  /// Control labels to optimize; empty uses every model control.
  std::vector<std::string> labels;
};

struct OptCtrlResult {
  HamiltonianProgram program;
  std::vector<double> gate_infidelities;
  bool all_converged = true;
};

/// Optimizes each gate of the circuit as a full-register target and
/// concatenates the step pulses in circuit order. Qubit-only registers.
OptCtrlResult load_circuit_optctrl(const QubitCircuit& circ, const HardwareModel& model,
                                   const OptCtrlOptions& options = {});

}  // namespace pulsesim
