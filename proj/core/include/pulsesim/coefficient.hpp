#pragma once

#include <vector>

namespace pulsesim {

/// Sampled real control amplitude. Step: coeff[i] holds on [tlist[i],
/// tlist[i+1]). Cubic: natural cubic spline through (tlist, coeff). Both are
/// zero outside [tlist.front(), tlist.back()).
class ControlCoefficient {
 public:
  enum class Kind { Step, Cubic };

  ControlCoefficient() = default;

  static ControlCoefficient step(std::vector<double> tlist, std::vector<double> coeff);
  static ControlCoefficient cubic(std::vector<double> tlist, std::vector<double> coeff);
  /// Single step of height `value` on [t0, t1).
  static ControlCoefficient constant(double value, double t0, double t1);

  Kind kind() const { return kind_; }
  const std::vector<double>& tlist() const { return tlist_; }
  const std::vector<double>& coeff() const { return coeff_; }
  bool empty() const { return tlist_.empty(); }
  double start() const { return empty() ? 0.0 : tlist_.front(); }
  double end() const { return empty() ? 0.0 : tlist_.back(); }

  double operator()(double t) const;
  /// Left limit at t; differs from operator() only at step edges.
  double left(double t) const;

  ControlCoefficient scaled(double s) const;
  /// Same shape moved later in time by dt.
  ControlCoefficient shifted(double dt) const;

  /// Integral over the support, exact for both kinds.
  double integral() const;

  /// Sup norm over the support, exact for both kinds.
  double max_abs() const;

  bool is_zero() const;

  /// Times at which the value or its derivative may jump.
  std::vector<double> knots() const;

  friend bool operator==(const ControlCoefficient&, const ControlCoefficient&) = default;

 private:
  Kind kind_ = Kind::Step;
  std::vector<double> tlist_;
  std::vector<double> coeff_;
  // Cubic segment polynomials: y + b dx + c dx^2 + d dx^3.
  std::vector<double> b_, c_, d_;
};

/// Concatenates step coefficients with disjoint supports into one, filling
/// gaps with zero. Inputs need not be sorted.
ControlCoefficient merge_steps(std::vector<ControlCoefficient> parts);

}  // namespace pulsesim
