#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "output.hpp"

namespace pulsesim::cli {

inline constexpr int kMaxQftQubits = 10;

struct RunOptions {
  std::string qasm_path;
  std::string device_path;
  std::string solver = "auto";
  std::string compiler = "native";
  std::string init;
  std::string tlist = "101";
  std::string observables;
  int ntraj = 500;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct ScheduleOptions {
  std::string qasm_path;
  std::string mode = "asap";
  std::string durations_path;
  bool permute = false;
};

struct QftOptions {
  int max_qubits = 6;
  double min_seconds = 0.05;
};

struct CrosstalkOptions {
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

struct RamseyOptions {
  double f = 0.5;
  double amp = 0.05;
  double t2 = 20.0;
  double t_max = 40.0;
  int points = 201;
};

// Each command writes its files and manifest.json under `out`. Inputs
// (QASM text, device config) are copied into the manifest so `replay` can
// rerun the command without the original files.
int cmd_run(const RunOptions& o, const std::filesystem::path& out);
/// Prints start times as a JSON array; `out` may be empty.
int cmd_schedule(const ScheduleOptions& o, const std::filesystem::path& out, std::ostream& os);
int cmd_bench_qft(const QftOptions& o, const std::filesystem::path& out);
int cmd_crosstalk(const CrosstalkOptions& o, const std::filesystem::path& out);
int cmd_ramsey(const RamseyOptions& o, const std::filesystem::path& out);
int cmd_replay(const std::string& manifest_path, const std::filesystem::path& out, std::ostream& os);

}  // namespace pulsesim::cli
