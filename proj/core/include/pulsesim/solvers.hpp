#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pulsesim/pulse.hpp"
#include "pulsesim/qobj.hpp"

namespace pulsesim {

struct SolverOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  std::optional<double> max_step;
  int ntraj = 500;
  std::uint64_t seed = 0;
  bool store_states = true;
  /// mcsolve workers; 0 reads PULSESIM_THREADS, then the hardware count.
  int threads = 0;
};

struct JumpRecord {
  double time;
  int channel;
};

struct SolverResult {
  std::vector<double> times;
  /// Kets for sesolve, density matrices otherwise (trajectory averages for mcsolve).
  std::vector<QuantumState> states;
  /// expect[k][i] = <e_ops[k]> at times[i].
  std::vector<std::vector<double>> expect;
  /// Standard error of the trajectory mean (mcsolve only).
  std::vector<std::vector<double>> expect_stderr;
  QuantumState final_state;
  int ntraj_used = 0;
  std::vector<std::vector<JumpRecord>> jump_records;
};

/// Time-independent system, mainly for tests: H plus constant collapse operators.
OpenSystem constant_system(const Operator& h, const std::vector<Operator>& c_ops = {});

/// i d psi/dt = H(t) psi. Collapse operators in `sys` are ignored.
/// An empty tlist means {0, sys.total_time}.
SolverResult sesolve(const OpenSystem& sys, const QuantumState& psi0, std::vector<double> tlist = {},
                     const std::vector<Operator>& e_ops = {}, const SolverOptions& options = {});

/// U(t1) solving i dU/dt = H(t) U from U(t0) = U0.
Matrix propagate_unitary(const OpenSystem& sys, const Matrix& u0, double t0, double t1,
                         const SolverOptions& options = {});
/// Same for a Hamiltonian with only step coefficients, as an exact product
/// of exp(-i H dt) over the intervals between knots.
Matrix propagate_stepwise(const OpenSystem& sys, const Matrix& u0, double t0, double t1);

/// Propagator over [0, sys.total_time].
Matrix propagator(const OpenSystem& sys, const SolverOptions& options = {});

/// Lindblad master equation with c(t) = coeff(t) * C. Kets are promoted.
SolverResult mesolve(const OpenSystem& sys, const QuantumState& rho0, std::vector<double> tlist = {},
                     const std::vector<Operator>& e_ops = {}, const SolverOptions& options = {});

/// Quantum trajectories. Trajectory i draws from a stream seeded by
/// hash(seed, i), so results do not depend on the thread count.
SolverResult mcsolve(const OpenSystem& sys, const QuantumState& psi0, std::vector<double> tlist = {},
                     const std::vector<Operator>& e_ops = {}, const SolverOptions& options = {});

/// time,<name_0>,<name_1>,... one row per output time.
void write_expect_csv(std::ostream& os, const SolverResult& result, const std::vector<std::string>& names);

}  // namespace pulsesim
