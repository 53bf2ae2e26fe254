#include <benchmark/benchmark.h>

#include "pulsesim/experiments.hpp"
#include "pulsesim/grape.hpp"
#include "pulsesim/linalg.hpp"
#include "pulsesim/processor.hpp"

using namespace pulsesim;

static void BM_CompileQft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QubitCircuit qc = qft_circuit(n);
  Processor proc = linear_spin_chain(n);
  for (auto _ : state) benchmark::DoNotOptimize(proc.load_circuit(qc).total_time);
}
BENCHMARK(BM_CompileQft)->DenseRange(1, 8)->Unit(benchmark::kMicrosecond);

static void BM_SolveQft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Processor proc = linear_spin_chain(n);
  proc.load_circuit(qft_circuit(n));
  const QuantumState psi0 = basis(Dims::qubits(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  SolverOptions o;
  o.store_states = false;
  for (auto _ : state) benchmark::DoNotOptimize(proc.run_state(psi0, SolverKind::Sesolve, {}, {}, o).final_state.norm());
}
BENCHMARK(BM_SolveQft)->DenseRange(1, 7)->Unit(benchmark::kMillisecond);

static void BM_MesolveDeutschJozsa(benchmark::State& state) {
  Processor proc = linear_spin_chain(3, std::nullopt, 30.0);
  proc.load_circuit(deutsch_jozsa_circuit());
  SolverOptions o;
  o.store_states = false;
  for (auto _ : state) benchmark::DoNotOptimize(proc.run_state(basis(Dims::qubits(3), {0, 0, 0}), SolverKind::Mesolve, {}, {}, o).final_state.norm());
}
BENCHMARK(BM_MesolveDeutschJozsa)->Unit(benchmark::kMillisecond);

static void BM_McsolveDeutschJozsa(benchmark::State& state) {
  Processor proc = linear_spin_chain(3, std::nullopt, 30.0);
  proc.load_circuit(deutsch_jozsa_circuit());
  SolverOptions o;
  o.store_states = false;
  o.ntraj = 100;
  o.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(proc.run_state(basis(Dims::qubits(3), {0, 0, 0}), SolverKind::Mcsolve, {}, {}, o).final_state.norm());
}
BENCHMARK(BM_McsolveDeutschJozsa)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ExpmHermitian(benchmark::State& state) {
  const long d = state.range(0);
  Matrix h = Matrix::Random(d, d);
  h = (h + h.adjoint()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm_hermitian(h, 0.1).norm());
}
BENCHMARK(BM_ExpmHermitian)->RangeMultiplier(4)->Range(4, 256);

static void BM_CrosstalkSweep(benchmark::State& state) {
  CrosstalkParams p;
  p.reps = static_cast<int>(state.range(0));
  p.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_crosstalk(p).back().mean_fidelity);
}
BENCHMARK(BM_CrosstalkSweep)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GrapeHadamard(benchmark::State& state) {
  GrapeProblem p;
  p.drift = Matrix::Zero(2, 2);
  p.controls = {sigmax().matrix(), sigmaz().matrix()};
  p.target = (Matrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  p.n_ts = 10;
  p.evo_time = 10.0;
  p.fid_goal = 1e-6;
  p.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(grape_optimize(p).infidelity);
}
BENCHMARK(BM_GrapeHadamard)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
