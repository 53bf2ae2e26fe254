#include "pulsesim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulsesim::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

DormandPrince::DormandPrince(Rhs f, Options options) : f_(std::move(f)), o_(options) {
  if (!(o_.rtol > 0) || !(o_.atol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(o_.max_step > 0)) throw std::invalid_argument("max_step must be positive");
}

void DormandPrince::reset(double t, const Matrix& y) {
  t_ = t_prev_ = t;
  y_ = y;
  y_prev_ = y;
  k1_.resize(y.rows(), y.cols());
  f_(t_, y_, k1_);
  k1_prev_ = k1_;
  rcont5_ = Matrix::Zero(y.rows(), y.cols());
}

double DormandPrince::error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1) const {
  double sum = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = o_.atol + o_.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(n, 1)));
}

double DormandPrince::initial_step(double t_stop) {
  // Hairer, Norsett and Wanner, Solving ODEs I, section II.4.
  const double span = t_stop - t_;
  const Eigen::ArrayXXd sc = o_.atol + o_.rtol * y_.cwiseAbs().array();
  auto scaled_norm = [&](const Matrix& m) {
    return std::sqrt((m.cwiseAbs().array() / sc).square().sum() / static_cast<double>(m.size()));
  };
  const double d0 = scaled_norm(y_);
  const double dd1 = scaled_norm(k1_);
  double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
  h0 = std::min(h0, span);
  tmp_ = y_ + cplx(h0) * k1_;
  k2_.resize(y_.rows(), y_.cols());
  f_(t_ + h0, tmp_, k2_);
  const double dd2 = scaled_norm(k2_ - k1_) / h0;
  const double big = std::max(dd1, dd2);
  const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span, o_.max_step});
}

void DormandPrince::step(double t_stop) {
  if (!(t_stop > t_)) throw std::invalid_argument("step target must be after the current time");
  if (h_ <= 0.0) h_ = initial_step(t_stop);
  const Eigen::Index r = y_.rows(), c = y_.cols();
  for (Matrix* k : {&k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(r, c);

  bool last_rejected = false;
  while (true) {
    if (steps_ + rejected_ >= o_.max_steps) throw std::runtime_error("integrator exceeded the step limit");
    double h = std::min({h_, o_.max_step, t_stop - t_});
    const bool hits_stop = t_stop - t_ - h <= 1e-12 * std::max(1.0, std::abs(t_stop));
    if (hits_stop) h = t_stop - t_;
    if (h < 1e-14 * std::max(1.0, std::abs(t_))) throw std::runtime_error("step size underflow");

    const cplx hc(h);
    tmp_ = y_ + hc * (a21 * k1_);
    f_(t_ + c2 * h, tmp_, k2_);
    tmp_ = y_ + hc * (a31 * k1_ + a32 * k2_);
    f_(t_ + c3 * h, tmp_, k3_);
    tmp_ = y_ + hc * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    f_(t_ + c4 * h, tmp_, k4_);
    tmp_ = y_ + hc * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    f_(t_ + c5 * h, tmp_, k5_);
    tmp_ = y_ + hc * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    const double t_new = hits_stop ? t_stop : t_ + h;
    f_(t_new, tmp_, k6_);
    Matrix y_new = y_ + hc * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    f_(t_new, y_new, k7_);
    const Matrix err = hc * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    const double en = error_norm(err, y_, y_new);
    if (!std::isfinite(en) || !finite(y_new)) {
      if (!finite(y_)) throw std::runtime_error("non-finite state");
      h_ = h * 0.2;
      ++rejected_;
      last_rejected = true;
      continue;
    }
    if (en <= 1.0) {
      rcont5_ = hc * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
      y_prev_ = std::move(y_);
      k1_prev_ = k1_;
      y_ = std::move(y_new);
      t_prev_ = t_;
      t_ = t_new;
      std::swap(k1_, k7_);
      double fac = en == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(en, -0.2));
      if (last_rejected) fac = std::min(fac, 1.0);
      const double proposed = h * std::max(0.2, fac);
      // A step clipped by t_stop says little about the natural step size.
      h_ = (hits_stop && fac >= 1.0) ? std::max(h_, proposed) : proposed;
      ++steps_;
      return;
    }
    h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
    ++rejected_;
    last_rejected = true;
  }
}

Matrix DormandPrince::dense(double t) const {
  const double h = t_ - t_prev_;
  if (h <= 0.0) return y_;
  const double th = (t - t_prev_) / h;
  const double th1 = 1.0 - th;
  const Matrix r2 = y_ - y_prev_;
  const Matrix r3 = cplx(h) * k1_prev_ - r2;
  const Matrix r4 = r2 - cplx(h) * k1_ - r3;
  return y_prev_ + th * (r2 + th1 * (r3 + th * (r4 + th1 * rcont5_)));
}

}  // namespace pulsesim::ode
