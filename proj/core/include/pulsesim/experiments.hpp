#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "pulsesim/fitting.hpp"
#include "pulsesim/processor.hpp"

namespace pulsesim {

// ---------------------------------------------------------------- cross-talk

/// Random-phase pi pulses on qubit 0 of a two-qubit register whose qubit 1
/// is detuned by `delta`; drives leak onto qubit 1 with ratio `lambda`.
struct CrosstalkParams {
  double lambda = 1.0;
  double delta = 1.852;
  double rabi = 0.02;
  double init_fidelity = 0.975;
  int reps = 1600;
  int max_pulses = 250;
  int stride = 50;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct CrosstalkPoint {
  int pulses = 0;
  double mean_fidelity = 0.0;
  double stderr_fidelity = 0.0;
};

/// Two-qubit model with sx_j = 2 pi sigma_x / 2, sy_j = 2 pi sigma_y / 2 and
/// drift 2 pi delta sigma_z / 2 on qubit 1.
std::shared_ptr<HardwareModel> crosstalk_model(double delta);

/// Step pulses for pi rotations about cos(phi) x + sin(phi) y on qubit 0.
HamiltonianProgram random_phase_program(const HardwareModel& model, const std::vector<double>& phases, double rabi);

/// Repetition r draws its phases from seed + r. Rows for 0, stride, ..., max_pulses.
std::vector<CrosstalkPoint> run_crosstalk(const CrosstalkParams& p);

/// pulse_count,mean_fidelity,stderr
void write_crosstalk_csv(std::ostream& os, const std::vector<CrosstalkPoint>& rows);

// ---------------------------------------------------------------- Ramsey

/// Qubit with drift 2 pi f sigma_z / 2 prepared in |1>, two pi/2 pulses of
/// amplitude `amp` around an idle time, T2 dephasing throughout. The drive
/// operator cancels the drift while it is on.
struct RamseyParams {
  double f = 0.5;
  double amp = 0.05;
  double t2 = 20.0;
  double t_max = 40.0;
  int points = 201;
};

struct RamseyResult {
  std::vector<double> idle;
  std::vector<double> sz;
  double pulse_time = 0.0;
  FitResult fit;
};

RamseyResult run_ramsey(const RamseyParams& p, const SolverOptions& options = {});

/// idle_time,sigma_z,fit
void write_ramsey_csv(std::ostream& os, const RamseyResult& r);

// ---------------------------------------------------------------- QFT timing

struct QftRow {
  int n = 0;
  double compile_seconds = 0.0;
  double solve_seconds = 0.0;
  double fidelity = 0.0;
};

/// QFT on a linear spin chain of n = 1..max_qubits qubits from |0...0>.
/// Each time is the best of five batches of repeats lasting at least `min_seconds`.
std::vector<QftRow> run_qft_bench(int max_qubits, double min_seconds = 0.05, const SolverOptions& options = {});

/// n,compile_seconds,solve_seconds,fidelity
void write_qft_csv(std::ostream& os, const std::vector<QftRow>& rows);

}  // namespace pulsesim
