#pragma once

#include <vector>

namespace pulsesim {

/// y = a exp(-t / tau) cos(2 pi f t + phi) + b
struct DampedCosine {
  double a = 1.0;
  double tau = 1.0;
  double f = 1.0;
  double phi = 0.0;
  double b = 0.0;

  double operator()(double t) const;
};

struct FitResult {
  DampedCosine params;
  double rms_residual = 0.0;
  bool converged = false;
};

/// Least-squares fit by Levenberg-Marquardt from `guess`.
FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y, const DampedCosine& guess);

/// Starting point from the data: amplitude and offset from the extremes,
/// frequency from mean-crossings, tau from the span.
DampedCosine guess_damped_cosine(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace pulsesim
