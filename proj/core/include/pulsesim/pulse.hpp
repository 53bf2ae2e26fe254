#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pulsesim/coefficient.hpp"
#include "pulsesim/qobj.hpp"

namespace pulsesim {

/// op on `targets`, scaled by coeff(t), or constant when coeff is absent.
struct Term {
  Operator op;
  std::vector<int> targets;
  std::optional<ControlCoefficient> coeff;
};

/// One control Hamiltonian term, its coefficient, and the noise tied to it.
class Pulse {
 public:
  Pulse(Operator op, std::vector<int> targets, ControlCoefficient coeff, std::string label);

  const Operator& op() const { return op_; }
  const std::vector<int>& targets() const { return targets_; }
  const ControlCoefficient& coeff() const { return coeff_; }
  const std::string& label() const { return label_; }
  const std::vector<Term>& control_noise() const { return control_noise_; }
  const std::vector<Term>& lindblad_noise() const { return lindblad_noise_; }
  bool has_noise() const { return !control_noise_.empty() || !lindblad_noise_.empty(); }

  /// Coherent term added to the Hamiltonian alongside the ideal one.
  void add_control_noise(Operator op, std::vector<int> targets, ControlCoefficient coeff);
  /// Collapse operator op * coeff(t), or constant when coeff is absent.
  void add_lindblad_noise(Operator op, std::vector<int> targets,
                          std::optional<ControlCoefficient> coeff = std::nullopt);

 private:
  Operator op_;
  std::vector<int> targets_;
  ControlCoefficient coeff_;
  std::string label_;
  std::vector<Term> control_noise_;
  std::vector<Term> lindblad_noise_;
};

/// H(t) = sum of drift terms + sum_j c_j(t) H_j, plus collapse operators.
struct HamiltonianProgram {
  Dims dims;
  std::vector<Term> drift;
  std::vector<Pulse> pulses;
  /// Processor-level collapse operators.
  std::vector<Term> c_ops;
  double total_time = 0.0;
};

/// Sum of sparse matrices with time-dependent scalar weights.
class TdOperator {
 public:
  TdOperator() = default;
  explicit TdOperator(long dim);

  long dim() const { return dim_; }
  void add_constant(const SparseMatrix& m);
  /// Terms sharing an identical matrix are merged with summed coefficients.
  void add_term(const SparseMatrix& m, const ControlCoefficient& c);

  std::size_t num_terms() const { return terms_.size(); }
  const SparseMatrix& constant() const { return constant_; }
  const SparseMatrix& term_matrix(std::size_t k) const { return terms_[k].op; }
  /// left = true takes left limits, for evaluation at the end of a smooth piece.
  double term_coeff(std::size_t k, double t, bool left = false) const;

  SparseMatrix at(double t, bool left = false) const;
  /// True when every coefficient is a step function.
  bool piecewise_constant() const;
  Matrix dense_at(double t) const { return Matrix(at(t)); }

 private:
  struct Entry {
    SparseMatrix op;
    std::vector<ControlCoefficient> coeffs;
  };
  long dim_ = 0;
  SparseMatrix constant_;
  std::vector<Entry> terms_;
};

struct CollapseOperator {
  SparseMatrix op;
  std::optional<ControlCoefficient> coeff;

  double weight(double t, bool left = false) const {
    if (!coeff) return 1.0;
    return left ? coeff->left(t) : (*coeff)(t);
  }
};

/// Solver-ready form of a HamiltonianProgram.
struct OpenSystem {
  Dims dims;
  TdOperator hamiltonian;
  std::vector<CollapseOperator> c_ops;
  /// Sorted times where coefficients may be non-smooth.
  std::vector<double> knots;
  double total_time = 0.0;
};

/// Expands every term to the full register; terms with an all-zero
/// coefficient are dropped. with_noise = false drops pulse
/// noise and all collapse operators.
OpenSystem assemble(const HamiltonianProgram& program, bool with_noise = true);

/// {"total_time", "pulses": [{label, targets, kind, tlist, coeff}]} with
/// numbers rounded to 12 significant digits.
std::string pulses_to_json(const HamiltonianProgram& program);

}  // namespace pulsesim
