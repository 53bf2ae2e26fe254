#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace pulsesim::cli;

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level simulation of quantum circuits"};
  app.require_subcommand(1);
  std::string out;

  RunOptions run;
  auto* c_run = app.add_subcommand("run", "Compile a QASM circuit for a device and simulate it");
  c_run->add_option("qasm", run.qasm_path, "OpenQASM 2.0 file")->required();
  c_run->add_option("--device", run.device_path, "Device config (JSON)")->required();
  c_run->add_option("--solver", run.solver, "auto, sesolve, mesolve or mcsolve")->capture_default_str();
  c_run->add_option("--compiler", run.compiler, "native or optctrl (GRAPE per gate)")->capture_default_str();
  c_run->add_option("--init", run.init, "Initial bit string; default all zeros");
  c_run->add_option("--tlist", run.tlist, "N points over the program, or t0:t1:N")->capture_default_str();
  c_run->add_option("--observables", run.observables, "Comma list of z:j, x:j, y:j, pop:bits; default z on every qubit");
  c_run->add_option("--ntraj", run.ntraj, "Trajectories for mcsolve")->capture_default_str();
  c_run->add_option("--seed", run.seed, "Seed for mcsolve and GRAPE")->capture_default_str();
  c_run->add_option("--threads", run.threads, "Worker threads; 0 uses PULSESIM_THREADS or all cores");
  c_run->add_option("--out", out, "Output directory")->required();

  ScheduleOptions sch;
  auto* c_sch = app.add_subcommand("schedule", "Print gate start times of a QASM circuit");
  c_sch->add_option("qasm", sch.qasm_path, "OpenQASM 2.0 file")->required();
  c_sch->add_option("--mode", sch.mode, "asap or alap")->capture_default_str();
  c_sch->add_option("--durations", sch.durations_path, "JSON object gate name -> duration; key \"default\" for the rest");
  c_sch->add_flag("--permute", sch.permute, "Allow reordering of commuting gates");
  c_sch->add_option("--out", out, "Also write schedule.json and manifest.json here");

  QftOptions qft;
  auto* c_qft = app.add_subcommand("bench-qft", "Time QFT compilation and simulation on a spin chain");
  c_qft->add_option("--max-qubits", qft.max_qubits, "Largest register (at most 10)")->capture_default_str();
  c_qft->add_option("--min-seconds", qft.min_seconds, "Minimum duration of each timing batch")->capture_default_str();
  c_qft->add_option("--out", out, "Output directory")->required();

  CrosstalkOptions xt;
  auto* c_xt = app.add_subcommand("crosstalk", "Random-phase pi pulses with classical cross-talk onto a neighbour");
  c_xt->add_option("--lambda", xt.lambda, "Cross-talk amplitude ratio")->capture_default_str();
  c_xt->add_option("--delta", xt.delta, "Neighbour detuning (MHz)")->capture_default_str();
  c_xt->add_option("--rabi", xt.rabi, "Rabi frequency (MHz)")->capture_default_str();
  c_xt->add_option("--init-fidelity", xt.init_fidelity, "Initial neighbour fidelity")->capture_default_str();
  c_xt->add_option("--reps", xt.reps, "Repetitions")->capture_default_str();
  c_xt->add_option("--max-pulses", xt.max_pulses, "Longest pulse sequence")->capture_default_str();
  c_xt->add_option("--stride", xt.stride, "Pulse-count spacing of the output rows")->capture_default_str();
  c_xt->add_option("--seed", xt.seed, "Master seed; repetition r uses seed + r")->capture_default_str();
  c_xt->add_option("--threads", xt.threads, "Worker threads; 0 uses PULSESIM_THREADS or all cores");
  c_xt->add_option("--out", out, "Output directory")->required();

  RamseyOptions ram;
  auto* c_ram = app.add_subcommand("ramsey", "Ramsey fringes under T2 dephasing");
  c_ram->add_option("--f", ram.f, "Qubit frequency (MHz)")->capture_default_str();
  c_ram->add_option("--amp", ram.amp, "Drive amplitude (MHz)")->capture_default_str();
  c_ram->add_option("--t2", ram.t2, "T2 (us)")->capture_default_str();
  c_ram->add_option("--t-max", ram.t_max, "Longest idle time (us)")->capture_default_str();
  c_ram->add_option("--points", ram.points, "Idle times sampled")->capture_default_str();
  c_ram->add_option("--out", out, "Output directory")->required();

  std::string manifest;
  auto* c_rep = app.add_subcommand("replay", "Rerun a command from its manifest.json");
  c_rep->add_option("manifest", manifest, "manifest.json written by an earlier command")->required();
  c_rep->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (c_run->parsed()) return cmd_run(run, out);
    if (c_sch->parsed()) return cmd_schedule(sch, out, std::cout);
    if (c_qft->parsed()) return cmd_bench_qft(qft, out);
    if (c_xt->parsed()) return cmd_crosstalk(xt, out);
    if (c_ram->parsed()) return cmd_ramsey(ram, out);
    if (c_rep->parsed()) return cmd_replay(manifest, out, std::cout);
  } catch (const CliError& e) {
    std::cerr << "pulsesim: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "pulsesim: " << e.what() << "\n";
    return kSolverError;
  }
  return kConfigError;
}
