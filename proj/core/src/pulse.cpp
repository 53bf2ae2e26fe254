#include "pulsesim/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace pulsesim {

namespace {

void check_local(const Operator& op, const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("pulse term needs at least one target");
  if (op.dims().num_subsystems() != static_cast<int>(targets.size()) && op.dims().num_subsystems() != 1)
    throw std::invalid_argument("operator dims do not match the number of targets");
}

SparseMatrix expand_term(const Term& term, const Dims& dims) {
  const Dims want = dims.select(term.targets);
  if (term.op.dim() != want.total()) throw std::invalid_argument("term operator does not match its target dims");
  return expand_sparse(term.op.matrix(), term.targets, dims);
}

bool same_matrix(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.nonZeros() != b.nonZeros() || a.rows() != b.rows()) return false;
  return SparseMatrix(a - b).norm() == 0.0;
}

double round12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

// ---------------------------------------------------------------- Pulse

Pulse::Pulse(Operator op, std::vector<int> targets, ControlCoefficient coeff, std::string label)
    : op_(std::move(op)), targets_(std::move(targets)), coeff_(std::move(coeff)), label_(std::move(label)) {
  check_local(op_, targets_);
}

void Pulse::add_control_noise(Operator op, std::vector<int> targets, ControlCoefficient coeff) {
  check_local(op, targets);
  control_noise_.push_back({std::move(op), std::move(targets), std::move(coeff)});
}

void Pulse::add_lindblad_noise(Operator op, std::vector<int> targets, std::optional<ControlCoefficient> coeff) {
  check_local(op, targets);
  lindblad_noise_.push_back({std::move(op), std::move(targets), std::move(coeff)});
}

// ---------------------------------------------------------------- TdOperator

TdOperator::TdOperator(long dim) : dim_(dim), constant_(dim, dim) {}

void TdOperator::add_constant(const SparseMatrix& m) { constant_ += m; }

void TdOperator::add_term(const SparseMatrix& m, const ControlCoefficient& c) {
  if (c.empty()) return;
  for (Entry& e : terms_) {
    if (same_matrix(e.op, m)) {
      e.coeffs.push_back(c);
      return;
    }
  }
  terms_.push_back({m, {c}});
}

double TdOperator::term_coeff(std::size_t k, double t, bool left) const {
  double v = 0.0;
  for (const auto& c : terms_[k].coeffs) v += left ? c.left(t) : c(t);
  return v;
}

SparseMatrix TdOperator::at(double t, bool left) const {
  SparseMatrix h = constant_;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const double c = term_coeff(k, t, left);
    if (c != 0.0) h += terms_[k].op * cplx(c, 0.0);
  }
  return h;
}

bool TdOperator::piecewise_constant() const {
  for (const Entry& e : terms_)
    for (const auto& c : e.coeffs)
      if (c.kind() != ControlCoefficient::Kind::Step) return false;
  return true;
}

// ---------------------------------------------------------------- assemble

OpenSystem assemble(const HamiltonianProgram& program, bool with_noise) {
  OpenSystem sys;
  sys.dims = program.dims;
  sys.total_time = program.total_time;
  sys.hamiltonian = TdOperator(program.dims.total());
  std::vector<double> knots{0.0, program.total_time};
  auto add_knots = [&](const ControlCoefficient& c) {
    const auto k = c.knots();
    knots.insert(knots.end(), k.begin(), k.end());
  };
  auto add_ham = [&](const Term& term) {
    const SparseMatrix m = expand_term(term, program.dims);
    if (term.coeff) {
      if (term.coeff->is_zero()) return;
      sys.hamiltonian.add_term(m, *term.coeff);
      add_knots(*term.coeff);
    } else {
      sys.hamiltonian.add_constant(m);
    }
  };
  auto add_collapse = [&](const Term& term) {
    if (term.coeff && term.coeff->is_zero()) return;
    sys.c_ops.push_back({expand_term(term, program.dims), term.coeff});
    if (term.coeff) add_knots(*term.coeff);
  };

  for (const Term& d : program.drift) add_ham(d);
  for (const Pulse& p : program.pulses) {
    add_ham(Term{p.op(), p.targets(), p.coeff()});
    if (!with_noise) continue;
    for (const Term& n : p.control_noise()) add_ham(n);
    for (const Term& n : p.lindblad_noise()) add_collapse(n);
  }
  if (with_noise)
    for (const Term& c : program.c_ops) add_collapse(c);

  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              knots.end());
  sys.knots = std::move(knots);
  return sys;
}

// ---------------------------------------------------------------- JSON

std::string pulses_to_json(const HamiltonianProgram& program) {
  nlohmann::ordered_json doc;
  doc["total_time"] = round12(program.total_time);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Pulse& p : program.pulses) {
    nlohmann::ordered_json e;
    e["label"] = p.label();
    e["targets"] = p.targets();
    e["kind"] = p.coeff().kind() == ControlCoefficient::Kind::Step ? "step" : "cubic";
    std::vector<double> t;
    std::vector<double> c;
    for (double v : p.coeff().tlist()) t.push_back(round12(v));
    for (double v : p.coeff().coeff()) c.push_back(round12(v));
    e["tlist"] = t;
    e["coeff"] = c;
    arr.push_back(std::move(e));
  }
  doc["pulses"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace pulsesim
