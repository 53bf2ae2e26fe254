#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulsesim/qobj.hpp"

namespace pulsesim::cli {

using json = nlohmann::ordered_json;

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseError = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kSolverError = 3;

/// Failure carrying the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

/// Value rounded to 12 significant digits.
double round12(double v);
std::string fmt12(double v);
/// Integral values as JSON integers, others rounded to 12 digits.
json json_number(double v);

/// {"kind", "dims", "real", "imag"}; kets are flat arrays, density matrices
/// nested by row.
json state_to_json(const QuantumState& s);

/// Writes `text` to dir/name, creating dir. Returns the file name.
std::string write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text);

std::string read_text(const std::filesystem::path& path);

/// Comma-separated list: "z:j", "x:j", "y:j" act on the 0/1 levels of
/// qubit j; "pop:b0b1..." projects qubits 0.. onto the given bits.
struct Observable {
  std::string name;
  Operator op;
};
std::vector<Observable> parse_observables(const std::string& spec, const Dims& dims, int num_qubits);

/// "N" (N points over [0, T]) or "t0:t1:N".
std::vector<double> parse_tlist(const std::string& spec, double total_time);

/// Bit string of length num_qubits.
std::vector<int> parse_bits(const std::string& bits, int num_qubits);

}  // namespace pulsesim::cli
