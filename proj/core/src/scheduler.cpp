#include "pulsesim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pulsesim/linalg.hpp"

namespace pulsesim {

namespace {

constexpr double kTimeEps = 1e-12;

enum class Axis { Z, X, Other };

Axis axis_on(const Gate& g, int q) {
  static const std::set<std::string, std::less<>> zdiag = {"Z", "S", "T", "SDG", "TDG", "RZ", "PHASE", "CZ", "ID"};
  static const std::set<std::string, std::less<>> xdiag = {"X", "RX"};
  if (zdiag.count(g.name)) return Axis::Z;
  if (xdiag.count(g.name)) return Axis::X;
  if (g.name == "CNOT" || g.name == "TOFFOLI") {
    if (std::find(g.controls.begin(), g.controls.end(), q) != g.controls.end()) return Axis::Z;
    return Axis::X;
  }
  return Axis::Other;
}

bool commute_by_matrix(const Gate& a, const Gate& b, const CustomGateTable& custom) {
  std::vector<int> all = a.qubits();
  for (int q : b.qubits())
    if (std::find(all.begin(), all.end(), q) == all.end()) all.push_back(q);
  std::sort(all.begin(), all.end());
  auto local = [&](Gate g) {
    for (int& q : g.targets) q = static_cast<int>(std::lower_bound(all.begin(), all.end(), q) - all.begin());
    for (int& q : g.controls) q = static_cast<int>(std::lower_bound(all.begin(), all.end(), q) - all.begin());
    return gate_unitary(g, static_cast<int>(all.size()), custom).matrix();
  };
  const Matrix ua = local(a);
  const Matrix ub = local(b);
  return linalg::max_abs(ua * ub - ub * ua) < 1e-10;
}

int num_slots_qubits(const std::vector<Instruction>& instrs) {
  int nq = 0;
  for (const auto& in : instrs)
    for (int q : in.gate.qubits()) nq = std::max(nq, q + 1);
  return nq;
}

// Qubits first, then resources offset by the qubit count.
std::vector<int> slots(const Instruction& in, int nq) {
  std::vector<int> s = in.gate.qubits();
  for (int r : in.resources) {
    if (r < 0) throw std::invalid_argument("instruction resource must be non-negative");
    s.push_back(nq + r);
  }
  return s;
}

int num_slots(const std::vector<Instruction>& instrs, int nq) {
  int n = nq;
  for (const auto& in : instrs)
    for (int r : in.resources) n = std::max(n, nq + r + 1);
  return n;
}

ScheduleResult list_schedule(const std::vector<Instruction>& instrs, const std::vector<int>& original_index,
                             bool allow_permutation, const CustomGateTable& custom) {
  const int n = static_cast<int>(instrs.size());
  const DependencyGraph graph = build_dependency_graph(instrs, allow_permutation, custom);
  const int nq = num_slots_qubits(instrs);
  const int num_qubits = num_slots(instrs, nq);

  std::vector<double> start(static_cast<std::size_t>(n), 0.0);
  std::vector<double> finish(static_cast<std::size_t>(n), 0.0);
  std::vector<double> ready_at(static_cast<std::size_t>(n), 0.0);
  std::vector<int> waiting(static_cast<std::size_t>(n));
  std::vector<double> busy_until(static_cast<std::size_t>(num_qubits), 0.0);
  std::vector<std::vector<int>> used(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) used[i] = slots(instrs[i], nq);
  std::vector<int> frontier;
  for (int i = 0; i < n; ++i) {
    waiting[i] = static_cast<int>(graph.predecessors[i].size());
    if (waiting[i] == 0) frontier.push_back(i);
  }
  std::vector<double> running_finish;
  double t = 0.0;
  int scheduled = 0;
  while (scheduled < n) {
    while (true) {
      int best = -1;
      for (int i : frontier) {
        if (ready_at[i] > t + kTimeEps) continue;
        bool free = true;
        for (int q : used[i]) free = free && busy_until[q] <= t + kTimeEps;
        if (!free) continue;
        if (best < 0 || graph.priority[i] > graph.priority[best] + kTimeEps ||
            (std::abs(graph.priority[i] - graph.priority[best]) <= kTimeEps && original_index[i] < original_index[best]))
          best = i;
      }
      if (best < 0) break;
      frontier.erase(std::find(frontier.begin(), frontier.end(), best));
      start[best] = t;
      finish[best] = t + instrs[best].duration;
      for (int q : used[best]) busy_until[q] = finish[best];
      running_finish.push_back(finish[best]);
      ++scheduled;
      for (int s : graph.successors[best]) {
        ready_at[s] = std::max(ready_at[s], finish[best]);
        if (--waiting[s] == 0) frontier.push_back(s);
      }
    }
    if (scheduled == n) break;
    double next = std::numeric_limits<double>::infinity();
    for (double f : running_finish)
      if (f > t + kTimeEps) next = std::min(next, f);
    if (!std::isfinite(next)) throw std::logic_error("scheduler stalled");
    std::erase_if(running_finish, [&](double f) { return f <= next + kTimeEps; });
    t = next;
  }
  ScheduleResult r;
  r.start_times = start;
  for (int i = 0; i < n; ++i) r.makespan = std::max(r.makespan, finish[i]);
  return r;
}

}  // namespace

bool commute(const Gate& a, const Gate& b, const CustomGateTable& custom) {
  if (a.name == "GLOBALPHASE" || b.name == "GLOBALPHASE") return true;
  const std::vector<int> qa = a.qubits();
  const std::vector<int> qb = b.qubits();
  std::vector<int> shared;
  for (int q : qa)
    if (std::find(qb.begin(), qb.end(), q) != qb.end()) shared.push_back(q);
  if (shared.empty()) return true;
  if (a == b) return true;
  for (Axis want : {Axis::Z, Axis::X}) {
    bool all = true;
    for (int q : shared) all = all && axis_on(a, q) == want && axis_on(b, q) == want;
    if (all) return true;
  }
  return commute_by_matrix(a, b, custom);
}

DependencyGraph build_dependency_graph(const std::vector<Instruction>& instrs, bool allow_permutation,
                                       const CustomGateTable& custom) {
  const int n = static_cast<int>(instrs.size());
  DependencyGraph g;
  g.successors.assign(static_cast<std::size_t>(n), {});
  g.predecessors.assign(static_cast<std::size_t>(n), {});
  for (const auto& in : instrs)
    if (in.duration < 0 || !std::isfinite(in.duration))
      throw std::invalid_argument("instruction duration must be finite and non-negative");
  const int nq = num_slots_qubits(instrs);
  const int num_qubits = num_slots(instrs, nq);
  // Per qubit: groups of consecutive, mutually commuting gates.
  std::vector<std::vector<std::vector<int>>> groups(static_cast<std::size_t>(num_qubits));
  for (int i = 0; i < n; ++i) {
    for (int q : slots(instrs[i], nq)) {
      auto& gq = groups[q];
      bool joins = allow_permutation && !gq.empty() && q < nq;
      if (joins)
        for (int j : gq.back()) joins = joins && commute(instrs[j].gate, instrs[i].gate, custom);
      if (joins) {
        gq.back().push_back(i);
      } else {
        gq.push_back({i});
      }
    }
  }
  for (const auto& gq : groups) {
    for (std::size_t k = 1; k < gq.size(); ++k) {
      for (int b : gq[k - 1]) {
        for (int a : gq[k]) {
          auto& succ = g.successors[b];
          if (std::find(succ.begin(), succ.end(), a) == succ.end()) {
            succ.push_back(a);
            g.predecessors[a].push_back(b);
          }
        }
      }
    }
  }
  g.cycle.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int p : g.predecessors[i]) g.cycle[i] = std::max(g.cycle[i], g.cycle[p] + 1);
  g.priority.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i)
    for (int s : g.successors[i]) g.priority[i] = std::max(g.priority[i], instrs[s].duration + g.priority[s]);
  return g;
}

ScheduleResult schedule_instructions(const std::vector<Instruction>& instrs, ScheduleMode mode,
                                     bool allow_permutation, const CustomGateTable& custom) {
  const int n = static_cast<int>(instrs.size());
  std::vector<int> index(static_cast<std::size_t>(n));
  std::iota(index.begin(), index.end(), 0);
  if (mode == ScheduleMode::ASAP) return list_schedule(instrs, index, allow_permutation, custom);

  std::vector<Instruction> reversed(instrs.rbegin(), instrs.rend());
  std::reverse(index.begin(), index.end());
  const ScheduleResult r = list_schedule(reversed, index, allow_permutation, custom);
  ScheduleResult out;
  out.makespan = r.makespan;
  out.start_times.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const int orig = index[k];
    out.start_times[orig] = r.makespan - (r.start_times[k] + reversed[k].duration);
  }
  return out;
}

std::vector<int> schedule_gates(const QubitCircuit& circ, ScheduleMode mode, bool allow_permutation) {
  std::vector<Instruction> instrs;
  instrs.reserve(circ.gates().size());
  for (const Gate& g : circ.gates()) instrs.push_back({g, 1.0});
  const ScheduleResult r = schedule_instructions(instrs, mode, allow_permutation, circ.custom_gates());
  std::vector<int> cycles;
  cycles.reserve(r.start_times.size());
  for (double s : r.start_times) cycles.push_back(static_cast<int>(std::lround(s)));
  return cycles;
}

std::vector<int> execution_order(const ScheduleResult& result) {
  std::vector<int> order(result.start_times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return result.start_times[a] < result.start_times[b] - kTimeEps; });
  return order;
}

}  // namespace pulsesim
