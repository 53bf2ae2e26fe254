#include "pulsesim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>
#include <unsupported/Eigen/LevenbergMarquardt>

namespace pulsesim {

namespace {

using std::numbers::pi;

struct Functor : Eigen::DenseFunctor<double> {
  const std::vector<double>& t;
  const std::vector<double>& y;

  Functor(const std::vector<double>& tt, const std::vector<double>& yy)
      : Eigen::DenseFunctor<double>(5, static_cast<int>(tt.size())), t(tt), y(yy) {}

  static DampedCosine unpack(const InputType& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

  int operator()(const InputType& x, ValueType& fvec) const {
    const DampedCosine m = unpack(x);
    for (std::size_t i = 0; i < t.size(); ++i) fvec[static_cast<Eigen::Index>(i)] = m(t[i]) - y[i];
    return 0;
  }

  int df(const InputType& x, JacobianType& jac) const {
    const double a = x[0], tau = x[1], f = x[2], phi = x[3];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double e = std::exp(-t[i] / tau);
      const double w = 2 * pi * f * t[i] + phi;
      const double c = std::cos(w);
      const double s = std::sin(w);
      jac(r, 0) = e * c;
      jac(r, 1) = a * e * c * t[i] / (tau * tau);
      jac(r, 2) = -a * e * s * 2 * pi * t[i];
      jac(r, 3) = -a * e * s;
      jac(r, 4) = 1.0;
    }
    return 0;
  }
};

}  // namespace

double DampedCosine::operator()(double t) const { return a * std::exp(-t / tau) * std::cos(2 * pi * f * t + phi) + b; }

FitResult fit_damped_cosine(const std::vector<double>& t, const std::vector<double>& y, const DampedCosine& guess) {
  if (t.size() != y.size()) throw std::invalid_argument("fit needs matching t and y");
  if (t.size() < 6) throw std::invalid_argument("fit needs at least six points");
  Functor fn(t, y);
  Eigen::LevenbergMarquardt<Functor> lm(fn);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(4000);
  Eigen::VectorXd x(5);
  x << guess.a, guess.tau, guess.f, guess.phi, guess.b;
  const Eigen::LevenbergMarquardtSpace::Status st = lm.minimize(x);
  FitResult r;
  r.params = Functor::unpack(x);
  if (r.params.a < 0) {
    r.params.a = -r.params.a;
    r.params.phi += pi;
  }
  r.params.phi = std::remainder(r.params.phi, 2 * pi);
  double ss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) ss += std::pow(r.params(t[i]) - y[i], 2);
  r.rms_residual = std::sqrt(ss / static_cast<double>(t.size()));
  r.converged = st > 0 && st != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation && std::isfinite(ss) &&
                r.params.tau > 0;
  return r;
}

DampedCosine guess_damped_cosine(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() < 3 || t.size() != y.size()) throw std::invalid_argument("guess needs at least three matching points");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double u = y[i] - mean;
    const double v = y[i + 1] - mean;
    if ((u < 0) != (v < 0) && u != v) crossings.push_back(t[i] + (t[i + 1] - t[i]) * u / (u - v));
  }
  DampedCosine g;
  g.b = mean;
  g.a = (*hi - *lo) / 2.0;
  g.tau = t.back() - t.front();
  g.f = crossings.size() >= 2 ? (crossings.size() - 1) / (2.0 * (crossings.back() - crossings.front())) : 1.0 / g.tau;
  const double c = std::clamp((y.front() - g.b) / g.a, -1.0, 1.0);
  g.phi = std::acos(c) * (y.size() > 1 && y[1] > y[0] ? -1.0 : 1.0);
  return g;
}

}  // namespace pulsesim
