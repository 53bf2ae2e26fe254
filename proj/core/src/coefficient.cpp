#include "pulsesim/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulsesim {

namespace {

void check_times(const std::vector<double>& t) {
  if (t.size() < 2) throw std::invalid_argument("coefficient needs at least two sample times");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) throw std::invalid_argument("coefficient times must be finite");
    if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("coefficient times must be strictly increasing");
  }
}

void check_values(const std::vector<double>& c) {
  for (double v : c)
    if (!std::isfinite(v)) throw std::invalid_argument("coefficient values must be finite");
}

}  // namespace

ControlCoefficient ControlCoefficient::step(std::vector<double> tlist, std::vector<double> coeff) {
  check_times(tlist);
  check_values(coeff);
  if (coeff.size() + 1 != tlist.size()) throw std::invalid_argument("step coefficient needs len(coeff) = len(tlist) - 1");
  ControlCoefficient c;
  c.kind_ = Kind::Step;
  c.tlist_ = std::move(tlist);
  c.coeff_ = std::move(coeff);
  return c;
}

ControlCoefficient ControlCoefficient::cubic(std::vector<double> tlist, std::vector<double> coeff) {
  check_times(tlist);
  check_values(coeff);
  if (coeff.size() != tlist.size()) throw std::invalid_argument("cubic coefficient needs len(coeff) = len(tlist)");
  ControlCoefficient c;
  c.kind_ = Kind::Cubic;
  c.tlist_ = std::move(tlist);
  c.coeff_ = std::move(coeff);

  // Natural spline: second derivatives m with m[0] = m[n-1] = 0 (Thomas algorithm).
  const std::size_t n = c.tlist_.size();
  const auto& t = c.tlist_;
  const auto& y = c.coeff_;
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t[i + 1] - t[i];
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    const std::size_t k = n - 2;
    std::vector<double> diag(k), upper(k), rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      diag[i] = 2.0 * (h[i] + h[i + 1]);
      upper[i] = h[i + 1];
      rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h[i + 1] - (y[i + 1] - y[i]) / h[i]);
    }
    for (std::size_t i = 1; i < k; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
  }
  c.b_.resize(n - 1);
  c.c_.resize(n - 1);
  c.d_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c.b_[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    c.c_[i] = m[i] / 2.0;
    c.d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
  }
  return c;
}

ControlCoefficient ControlCoefficient::constant(double value, double t0, double t1) {
  return step({t0, t1}, {value});
}

double ControlCoefficient::operator()(double t) const {
  if (empty() || !(t >= tlist_.front()) || !(t < tlist_.back())) {
    // Cubic splines include their right endpoint so the last sample is honoured.
    if (kind_ == Kind::Cubic && !empty() && t == tlist_.back()) return coeff_.back();
    return 0.0;
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(tlist_.begin(), tlist_.end(), t) - tlist_.begin()) - 1;
  if (kind_ == Kind::Step) return coeff_[i];
  const double dx = t - tlist_[i];
  return coeff_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

double ControlCoefficient::left(double t) const {
  if (empty() || !(t > tlist_.front()) || !(t <= tlist_.back())) return 0.0;
  const std::size_t i = static_cast<std::size_t>(std::lower_bound(tlist_.begin(), tlist_.end(), t) - tlist_.begin()) - 1;
  if (kind_ == Kind::Step) return coeff_[i];
  const double dx = t - tlist_[i];
  return coeff_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

ControlCoefficient ControlCoefficient::scaled(double s) const {
  ControlCoefficient c = *this;
  for (double& v : c.coeff_) v *= s;
  for (double& v : c.b_) v *= s;
  for (double& v : c.c_) v *= s;
  for (double& v : c.d_) v *= s;
  return c;
}

ControlCoefficient ControlCoefficient::shifted(double dt) const {
  ControlCoefficient c = *this;
  for (double& v : c.tlist_) v += dt;
  return c;
}

double ControlCoefficient::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < tlist_.size(); ++i) {
    const double h = tlist_[i + 1] - tlist_[i];
    if (kind_ == Kind::Step)
      total += coeff_[i] * h;
    else
      total += h * (coeff_[i] + h * (b_[i] / 2.0 + h * (c_[i] / 3.0 + h * d_[i] / 4.0)));
  }
  return total;
}

double ControlCoefficient::max_abs() const {
  double best = 0.0;
  for (double v : coeff_) best = std::max(best, std::abs(v));
  if (kind_ == Kind::Step) return best;
  for (std::size_t i = 0; i + 1 < tlist_.size(); ++i) {
    const double h = tlist_[i + 1] - tlist_[i];
    // Critical points of b + 2c x + 3d x^2 inside the segment.
    const double qa = 3.0 * d_[i];
    const double qb = 2.0 * c_[i];
    const double qc = b_[i];
    std::vector<double> roots;
    if (std::abs(qa) < 1e-300) {
      if (std::abs(qb) > 1e-300) roots.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0) {
        const double s = std::sqrt(disc);
        roots.push_back((-qb + s) / (2.0 * qa));
        roots.push_back((-qb - s) / (2.0 * qa));
      }
    }
    for (double x : roots) {
      if (x > 0 && x < h) best = std::max(best, std::abs(coeff_[i] + x * (b_[i] + x * (c_[i] + x * d_[i]))));
    }
  }
  return best;
}

bool ControlCoefficient::is_zero() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](double v) { return v == 0.0; });
}

std::vector<double> ControlCoefficient::knots() const {
  if (empty()) return {};
  if (kind_ == Kind::Step) return tlist_;
  return {tlist_.front(), tlist_.back()};
}

ControlCoefficient merge_steps(std::vector<ControlCoefficient> parts) {
  std::erase_if(parts, [](const ControlCoefficient& c) { return c.empty(); });
  if (parts.empty()) return {};
  for (const auto& p : parts)
    if (p.kind() != ControlCoefficient::Kind::Step) throw std::invalid_argument("merge_steps needs step coefficients");
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.start() < b.start(); });
  std::vector<double> t{parts.front().start()};
  std::vector<double> c;
  constexpr double eps = 1e-12;
  for (const auto& p : parts) {
    if (p.start() < t.back() - eps) throw std::invalid_argument("merge_steps: overlapping step coefficients");
    if (p.start() > t.back() + eps) {
      t.push_back(p.start());
      c.push_back(0.0);
    }
    for (std::size_t i = 0; i < p.coeff().size(); ++i) {
      c.push_back(p.coeff()[i]);
      t.push_back(p.tlist()[i + 1]);
    }
  }
  return ControlCoefficient::step(std::move(t), std::move(c));
}

}  // namespace pulsesim
