#include "commands.hpp"

#include <map>
#include <sstream>

#include "pulsesim/config.hpp"
#include "pulsesim/experiments.hpp"
#include "pulsesim/grape.hpp"
#include "pulsesim/qasm.hpp"
#include "pulsesim/scheduler.hpp"

#ifndef PULSESIM_VERSION
#define PULSESIM_VERSION "0.0.0"
#endif

namespace pulsesim::cli {

namespace {

json manifest(const std::string& command) {
  json m;
  m["tool"] = "pulsesim";
  m["version"] = PULSESIM_VERSION;
  m["command"] = command;
  return m;
}

void write_manifest(const std::filesystem::path& out, json m, const std::vector<std::string>& files) {
  m["outputs"] = files;
  write_file(out, "manifest.json", m.dump(2) + "\n");
}

QubitCircuit parse_circuit(const std::string& text) {
  try {
    return parse_qasm(text);
  } catch (const std::exception& e) {
    throw CliError(kParseError, std::string("QASM error: ") + e.what());
  }
}

std::string read_qasm(const std::string& path) {
  try {
    return read_text(path);
  } catch (const std::exception& e) {
    throw CliError(kParseError, e.what());
  }
}

DeviceConfig parse_config(const std::string& text) {
  try {
    return parse_device_config(text);
  } catch (const std::exception& e) {
    throw CliError(kConfigError, std::string("device config: ") + e.what());
  }
}

template <class F>
auto solver_stage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kSolverError, std::string("solver failed: ") + e.what());
  }
}

template <class F>
auto config_stage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kConfigError, e.what());
  }
}

SolverKind solver_kind(const std::string& s) {
  if (s == "auto") return SolverKind::Auto;
  if (s == "sesolve") return SolverKind::Sesolve;
  if (s == "mesolve") return SolverKind::Mesolve;
  if (s == "mcsolve") return SolverKind::Mcsolve;
  throw CliError(kConfigError, "unknown solver '" + s + "'");
}

int run_impl(const RunOptions& o, const std::string& qasm_text, const std::string& device_text,
             const std::filesystem::path& out) {
  const QubitCircuit circ = parse_circuit(qasm_text);
  const DeviceConfig cfg = parse_config(device_text);
  const SolverKind kind = solver_kind(o.solver);
  if (o.compiler != "native" && o.compiler != "optctrl")
    throw CliError(kConfigError, "compiler must be native or optctrl");
  if (o.ntraj < 1) throw CliError(kConfigError, "ntraj must be at least 1");
  if (circ.num_qubits() > cfg.num_qubits)
    throw CliError(kConfigError, "circuit needs " + std::to_string(circ.num_qubits()) + " qubits, device has " +
                                     std::to_string(cfg.num_qubits));

  Processor proc = config_stage([&] { return make_processor(cfg); });
  const int nq = proc.num_qubits();
  const std::vector<int> bits = parse_bits(o.init.empty() ? std::string(static_cast<std::size_t>(nq), '0') : o.init, nq);
  std::string obs_spec = o.observables;
  if (obs_spec.empty())
    for (int j = 0; j < nq; ++j) obs_spec += (j ? ",z:" : "z:") + std::to_string(j);
  const std::vector<Observable> obs = parse_observables(obs_spec, proc.dims(), nq);

  json m = manifest("run");
  json opt;
  opt["solver"] = o.solver;
  opt["compiler"] = o.compiler;
  opt["init"] = o.init;
  opt["tlist"] = o.tlist;
  opt["observables"] = o.observables;
  opt["ntraj"] = o.ntraj;
  opt["seed"] = o.seed;
  opt["threads"] = o.threads;
  m["options"] = opt;
  json in;
  in["qasm_path"] = o.qasm_path;
  in["device_path"] = o.device_path;
  in["qasm"] = qasm_text;
  in["device"] = json::parse(device_config_to_json(cfg));
  m["inputs"] = in;

  solver_stage([&] {
    if (o.compiler == "optctrl") {
      OptCtrlOptions oc;
      oc.seed = o.seed;
      proc.set_program(load_circuit_optctrl(circ, proc.model(), oc).program);
    } else {
      proc.load_circuit(circ);
    }
    return 0;
  });
  const std::vector<double> tlist = parse_tlist(o.tlist, proc.program().total_time);

  std::vector<Operator> e_ops;
  std::vector<std::string> names;
  for (const auto& ob : obs) {
    e_ops.push_back(ob.op);
    names.push_back(ob.name);
  }
  SolverOptions so;
  so.ntraj = o.ntraj;
  so.seed = o.seed;
  so.threads = o.threads;
  so.store_states = false;
  const QuantumState init = basis(Dims::qubits(nq), bits);
  const SolverResult res = solver_stage([&] { return proc.run_state(init, kind, tlist, e_ops, so); });

  std::vector<std::string> files;
  files.push_back(write_file(out, "pulses.json", proc.export_pulses()));
  std::ostringstream csv;
  write_expect_csv(csv, res, names);
  files.push_back(write_file(out, "result.csv", csv.str()));
  files.push_back(write_file(out, "final_state.json", state_to_json(res.final_state).dump(2) + "\n"));
  write_manifest(out, std::move(m), files);
  return kOk;
}

int schedule_impl(const ScheduleOptions& o, const std::string& qasm_text, const std::map<std::string, double>& durations,
                  const std::filesystem::path& out, std::ostream& os) {
  const QubitCircuit circ = parse_circuit(qasm_text);
  ScheduleMode mode;
  if (o.mode == "asap") {
    mode = ScheduleMode::ASAP;
  } else if (o.mode == "alap") {
    mode = ScheduleMode::ALAP;
  } else {
    throw CliError(kConfigError, "mode must be asap or alap");
  }
  double fallback = 1.0;
  if (auto it = durations.find("default"); it != durations.end()) fallback = it->second;
  std::vector<Instruction> instrs;
  for (const Gate& g : circ.gates()) {
    auto it = durations.find(g.name);
    instrs.push_back({g, it == durations.end() ? fallback : it->second});
  }
  const ScheduleResult r = config_stage([&] { return schedule_instructions(instrs, mode, o.permute, circ.custom_gates()); });
  json starts = json::array();
  for (double s : r.start_times) starts.push_back(json_number(s));
  os << starts.dump() << "\n";
  if (out.empty()) return kOk;

  json m = manifest("schedule");
  json opt;
  opt["mode"] = o.mode;
  opt["permute"] = o.permute;
  opt["durations"] = durations;
  m["options"] = opt;
  json in;
  in["qasm_path"] = o.qasm_path;
  in["qasm"] = qasm_text;
  m["inputs"] = in;
  json doc;
  doc["start_times"] = starts;
  doc["makespan"] = json_number(r.makespan);
  write_manifest(out, std::move(m), {write_file(out, "schedule.json", doc.dump(2) + "\n")});
  return kOk;
}

std::map<std::string, double> read_durations(const std::string& path) {
  std::map<std::string, double> d;
  if (path.empty()) return d;
  try {
    const json j = json::parse(read_text(path));
    if (!j.is_object()) throw std::runtime_error("durations file must be a JSON object");
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number()) throw std::runtime_error("duration of " + k + " must be a number");
      d[k] = v.get<double>();
    }
  } catch (const std::exception& e) {
    throw CliError(kConfigError, std::string("durations: ") + e.what());
  }
  return d;
}

}  // namespace

int cmd_run(const RunOptions& o, const std::filesystem::path& out) {
  const std::string qasm = read_qasm(o.qasm_path);
  std::string device;
  try {
    device = read_text(o.device_path);
  } catch (const std::exception& e) {
    throw CliError(kConfigError, e.what());
  }
  return run_impl(o, qasm, device, out);
}

int cmd_schedule(const ScheduleOptions& o, const std::filesystem::path& out, std::ostream& os) {
  return schedule_impl(o, read_qasm(o.qasm_path), read_durations(o.durations_path), out, os);
}

int cmd_bench_qft(const QftOptions& o, const std::filesystem::path& out) {
  if (o.max_qubits < 1 || o.max_qubits > kMaxQftQubits)
    throw CliError(kConfigError, "max-qubits must be in [1, " + std::to_string(kMaxQftQubits) + "]");
  if (!(o.min_seconds >= 0.0)) throw CliError(kConfigError, "min-seconds must be non-negative");
  const auto rows = solver_stage([&] { return run_qft_bench(o.max_qubits, o.min_seconds); });
  std::ostringstream csv;
  write_qft_csv(csv, rows);
  json m = manifest("bench-qft");
  json opt;
  opt["max_qubits"] = o.max_qubits;
  opt["min_seconds"] = o.min_seconds;
  m["options"] = opt;
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.fidelity > 0.99;
  m["fidelity_check"] = ok;
  write_manifest(out, std::move(m), {write_file(out, "qft.csv", csv.str())});
  if (!ok) throw CliError(kSolverError, "pulse-level QFT fidelity fell below 0.99");
  return kOk;
}

int cmd_crosstalk(const CrosstalkOptions& o, const std::filesystem::path& out) {
  CrosstalkParams p;
  p.lambda = o.lambda;
  p.delta = o.delta;
  p.rabi = o.rabi;
  p.init_fidelity = o.init_fidelity;
  p.reps = o.reps;
  p.max_pulses = o.max_pulses;
  p.stride = o.stride;
  p.seed = o.seed;
  p.threads = o.threads;
  if (o.reps < 1) throw CliError(kConfigError, "reps must be at least 1");
  if (!(o.rabi > 0.0)) throw CliError(kConfigError, "rabi must be positive");
  const auto rows = [&] {
    try {
      return run_crosstalk(p);
    } catch (const std::invalid_argument& e) {
      throw CliError(kConfigError, e.what());
    } catch (const std::exception& e) {
      throw CliError(kSolverError, e.what());
    }
  }();
  std::ostringstream csv;
  write_crosstalk_csv(csv, rows);
  json m = manifest("crosstalk");
  json opt;
  opt["lambda"] = o.lambda;
  opt["delta"] = o.delta;
  opt["rabi"] = o.rabi;
  opt["init_fidelity"] = o.init_fidelity;
  opt["reps"] = o.reps;
  opt["max_pulses"] = o.max_pulses;
  opt["stride"] = o.stride;
  opt["seed"] = o.seed;
  opt["threads"] = o.threads;
  m["options"] = opt;
  write_manifest(out, std::move(m), {write_file(out, "crosstalk.csv", csv.str())});
  return kOk;
}

int cmd_ramsey(const RamseyOptions& o, const std::filesystem::path& out) {
  RamseyParams p;
  p.f = o.f;
  p.amp = o.amp;
  p.t2 = o.t2;
  p.t_max = o.t_max;
  p.points = o.points;
  const RamseyResult r = [&] {
    try {
      return run_ramsey(p);
    } catch (const std::invalid_argument& e) {
      throw CliError(kConfigError, e.what());
    } catch (const std::exception& e) {
      throw CliError(kSolverError, e.what());
    }
  }();
  std::ostringstream csv;
  write_ramsey_csv(csv, r);
  json fit;
  fit["a"] = round12(r.fit.params.a);
  fit["tau"] = round12(r.fit.params.tau);
  fit["f"] = round12(r.fit.params.f);
  fit["phi"] = round12(r.fit.params.phi);
  fit["b"] = round12(r.fit.params.b);
  fit["rms_residual"] = round12(r.fit.rms_residual);
  fit["converged"] = r.fit.converged;
  fit["pulse_time"] = round12(r.pulse_time);
  json m = manifest("ramsey");
  json opt;
  opt["f"] = o.f;
  opt["amp"] = o.amp;
  opt["t2"] = o.t2;
  opt["t_max"] = o.t_max;
  opt["points"] = o.points;
  m["options"] = opt;
  std::vector<std::string> files{write_file(out, "ramsey.csv", csv.str()), write_file(out, "fit.json", fit.dump(2) + "\n")};
  write_manifest(out, std::move(m), files);
  return kOk;
}

int cmd_replay(const std::string& manifest_path, const std::filesystem::path& out, std::ostream& os) {
  json m;
  try {
    m = json::parse(read_text(manifest_path));
  } catch (const std::exception& e) {
    throw CliError(kConfigError, std::string("manifest: ") + e.what());
  }
  try {
    const std::string cmd = m.at("command").get<std::string>();
    const json& opt = m.at("options");
    if (cmd == "run") {
      RunOptions o;
      o.solver = opt.at("solver");
      o.compiler = opt.at("compiler");
      o.init = opt.at("init");
      o.tlist = opt.at("tlist");
      o.observables = opt.at("observables");
      o.ntraj = opt.at("ntraj");
      o.seed = opt.at("seed");
      o.threads = opt.at("threads");
      const json& in = m.at("inputs");
      o.qasm_path = in.at("qasm_path");
      o.device_path = in.at("device_path");
      return run_impl(o, in.at("qasm").get<std::string>(), in.at("device").dump(), out);
    }
    if (cmd == "schedule") {
      ScheduleOptions o;
      o.mode = opt.at("mode");
      o.permute = opt.at("permute");
      o.qasm_path = m.at("inputs").at("qasm_path");
      return schedule_impl(o, m.at("inputs").at("qasm").get<std::string>(),
                           opt.at("durations").get<std::map<std::string, double>>(), out, os);
    }
    if (cmd == "bench-qft") return cmd_bench_qft({opt.at("max_qubits"), opt.at("min_seconds")}, out);
    if (cmd == "crosstalk") {
      CrosstalkOptions o;
      o.lambda = opt.at("lambda");
      o.delta = opt.at("delta");
      o.rabi = opt.at("rabi");
      o.init_fidelity = opt.at("init_fidelity");
      o.reps = opt.at("reps");
      o.max_pulses = opt.at("max_pulses");
      o.stride = opt.at("stride");
      o.seed = opt.at("seed");
      o.threads = opt.at("threads");
      return cmd_crosstalk(o, out);
    }
    if (cmd == "ramsey") {
      RamseyOptions o;
      o.f = opt.at("f");
      o.amp = opt.at("amp");
      o.t2 = opt.at("t2");
      o.t_max = opt.at("t_max");
      o.points = opt.at("points");
      return cmd_ramsey(o, out);
    }
    throw CliError(kConfigError, "manifest names unknown command '" + cmd + "'");
  } catch (const json::exception& e) {
    throw CliError(kConfigError, std::string("manifest: ") + e.what());
  }
}

}  // namespace pulsesim::cli
