#pragma once

#include <vector>

#include "pulsesim/circuit.hpp"

namespace pulsesim {

/// A gate with its hardware duration.
struct Instruction {
  Gate gate;
  double duration = 1.0;
  /// Extra exclusive channels (e.g. a shared bus). Instructions sharing one
  /// are ordered as written and never overlap.
  std::vector<int> resources = {};
};

enum class ScheduleMode { ASAP, ALAP };

/// Edges b -> a (a depends on b) always point from lower to higher list index.
struct DependencyGraph {
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<int>> predecessors;
  /// Layer index: 0 for sources, 1 + max over predecessors otherwise.
  std::vector<int> cycle;
  /// Longest total duration of a dependent chain after the node.
  std::vector<double> priority;
};

struct ScheduleResult {
  std::vector<double> start_times;
  double makespan = 0.0;
};

/// True iff the two gates commute as full-register unitaries.
bool commute(const Gate& a, const Gate& b, const CustomGateTable& custom = {});

/// With `allow_permutation`, consecutive mutually commuting gates on a qubit
/// share a group and carry no edges between them.
DependencyGraph build_dependency_graph(const std::vector<Instruction>& instrs, bool allow_permutation,
                                       const CustomGateTable& custom = {});

/// List scheduling. Ties go to higher priority, then lower original index.
ScheduleResult schedule_instructions(const std::vector<Instruction>& instrs, ScheduleMode mode = ScheduleMode::ASAP,
                                     bool allow_permutation = false, const CustomGateTable& custom = {});

/// Gate cycles with unit durations.
std::vector<int> schedule_gates(const QubitCircuit& circ, ScheduleMode mode = ScheduleMode::ASAP,
                                bool allow_permutation = false);

/// Instruction indices sorted by start time, ties by index.
std::vector<int> execution_order(const ScheduleResult& result);

}  // namespace pulsesim
