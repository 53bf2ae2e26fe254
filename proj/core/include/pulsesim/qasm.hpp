#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pulsesim/circuit.hpp"

namespace pulsesim {

/// Parse failure with 1-based source position.
class QasmError : public std::runtime_error {
 public:
  QasmError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct QasmProgram {
  std::string version;
  std::vector<std::string> includes;
  std::vector<std::pair<std::string, int>> qregs;
  std::vector<std::pair<std::string, int>> cregs;
  QubitCircuit circuit{1};
};

/// Parses an OpenQASM 2.0 program. qelib1.inc gates are built in. Dropped
/// statements (measure, barrier) are reported through `warnings`.
QasmProgram parse_qasm_program(std::string_view text, std::vector<std::string>* warnings = nullptr);

QubitCircuit parse_qasm(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Like parse_qasm; additionally warns when a qelib1.inc next to the file
/// would have been shadowed by the built-in definitions.
QubitCircuit read_qasm_file(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Emits header, gate definitions needed for non-qelib gates, one qreg and
/// one statement per gate. Throws std::invalid_argument for custom gates.
std::string export_qasm(const QubitCircuit& circ);

void save_qasm(const QubitCircuit& circ, const std::filesystem::path& path);

}  // namespace pulsesim
