#pragma once

#include <functional>
#include <limits>

#include "pulsesim/qobj.hpp"

namespace pulsesim::ode {

struct Options {
  double rtol = 1e-8;
  double atol = 1e-8;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 100'000'000;
};

/// dy = f(t, y). dy is preallocated with the shape of y.
using Rhs = std::function<void(double t, const Matrix& y, Matrix& dy)>;

/// Dormand-Prince 5(4) with the 4th-order continuous extension.
class DormandPrince {
 public:
  DormandPrince(Rhs f, Options options);

  /// Starts a fresh smooth piece at (t, y), keeping the last step size guess.
  void reset(double t, const Matrix& y);
  /// One accepted step, ending no later than t_stop (exactly at t_stop when
  /// it is within reach).
  void step(double t_stop);

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const Matrix& y() const { return y_; }
  /// Interpolant over the last accepted step [t_prev, t].
  Matrix dense(double t) const;

  long steps() const { return steps_; }
  long rejected() const { return rejected_; }

 private:
  double initial_step(double t_stop);
  double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1) const;

  Rhs f_;
  Options o_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  Matrix y_, y_prev_;
  Matrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_;
  Matrix rcont5_;
  Matrix k1_prev_;
  long steps_ = 0;
  long rejected_ = 0;
};

}  // namespace pulsesim::ode
