#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "overdet/errors.hpp"

// Dormand-Prince 5(4) for second-order scalar equations written as 2-vectors.
namespace overdet::ode {

using State = std::array<double, 2>;

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-10;
  /// Converts between the two components when forming the error scale:
  /// y[0] ~ length_scale * y[1]. Keeps the test meaningful where one component vanishes.
  double length_scale = 1.0;
  double max_step = 0.1;
};

struct Step {
  double r0;
  State y0;
  State f0;
  double r1;
  State y1;
  State f1;
};

/// One explicit step of size h from (r, y) with slope f = rhs(r, y).
/// Returns the 5th-order solution, its slope and the embedded error estimate.
template <class Rhs>
void dopri_step(const Rhs& rhs, double r, const State& y, const State& f, double h, State& y_out,
                State& f_out, State& err) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  State k2, k3, k4, k5, k6, tmp;
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * a21 * f[i];
  k2 = rhs(r + c2 * h, tmp);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * f[i] + a32 * k2[i]);
  k3 = rhs(r + c3 * h, tmp);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = rhs(r + c4 * h, tmp);
  for (int i = 0; i < 2; ++i) {
    tmp[i] = y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  }
  k5 = rhs(r + c5 * h, tmp);
  for (int i = 0; i < 2; ++i) {
    tmp[i] = y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  }
  k6 = rhs(r + h, tmp);
  for (int i = 0; i < 2; ++i) {
    y_out[i] = y[i] + h * (b1 * f[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  }
  f_out = rhs(r + h, y_out);
  for (int i = 0; i < 2; ++i) {
    err[i] = h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * f_out[i]);
  }
}

/// Adaptive integrator holding the current point. `advance_to` lands exactly on
/// the requested abscissa so callers can sample on a fixed grid without
/// interpolation; each accepted step is reported to an observer that may stop the run.
template <class Rhs>
class Integrator {
 public:
  Integrator(Rhs rhs, double r0, const State& y0, Tolerances tol)
      : rhs_(std::move(rhs)), tol_(tol), r_(r0), y_(y0), f_(rhs_(r0, y0)) {
    h_ = std::min(tol_.max_step, 1e-3 * std::max(std::fabs(r0), tol_.length_scale));
  }

  double r() const noexcept { return r_; }
  const State& y() const noexcept { return y_; }
  const State& slope() const noexcept { return f_; }
  const Rhs& rhs() const noexcept { return rhs_; }

  /// Single untracked step of size h from the current point (event refinement).
  State trial(double h) const {
    State y1, f1, err;
    dopri_step(rhs_, r_, y_, f_, h, y1, f1, err);
    return y1;
  }

  /// Returns false if the observer requested a stop (the integrator then sits
  /// at the end of the step that triggered it).
  template <class Observer>
  bool advance_to(double r_target, Observer&& observer) {
    int guard = 0;
    while (r_ < r_target) {
      if (++guard > 2000000) throw ConvergenceFailure("ode: too many steps");
      double h = std::min({h_, tol_.max_step, r_target - r_});
      const bool last = (r_target - r_) <= h * (1.0 + 1e-12);
      if (last) h = r_target - r_;
      State y1, f1, err;
      dopri_step(rhs_, r_, y_, f_, h, y1, f1, err);
      const double en = error_norm(y_, y1, err);
      if (!std::isfinite(en)) {
        h_ = 0.1 * h;
        if (h_ < 1e-14 * std::max(1.0, std::fabs(r_))) {
          throw ConvergenceFailure("ode: non-finite state");
        }
        continue;
      }
      if (en <= 1.0) {
        const Step step{r_, y_, f_, last ? r_target : r_ + h, y1, f1};
        r_ = step.r1;
        y_ = y1;
        f_ = f1;
        const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (!last || grow < 1.0) h_ = h * grow;
        if (!observer(step)) return false;
      } else {
        h_ = h * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
        if (h_ < 1e-15 * std::max(1.0, std::fabs(r_))) {
          throw ConvergenceFailure("ode: step size underflow");
        }
      }
    }
    return true;
  }

  bool advance_to(double r_target) {
    return advance_to(r_target, [](const Step&) { return true; });
  }

  /// Rescale the state (linear problems only) to keep magnitudes bounded.
  void rescale(double factor) {
    for (int i = 0; i < 2; ++i) {
      y_[i] *= factor;
      f_[i] *= factor;
    }
  }

 private:
  double error_norm(const State& y0, const State& y1, const State& err) const {
    const double l = tol_.length_scale;
    const double m0 = std::max({std::fabs(y0[0]), std::fabs(y1[0]), l * std::fabs(y0[1]),
                                l * std::fabs(y1[1])});
    const double m1 = std::max({std::fabs(y0[1]), std::fabs(y1[1]), std::fabs(y0[0]) / l,
                                std::fabs(y1[0]) / l});
    const double s0 = tol_.abs + tol_.rel * m0;
    const double s1 = tol_.abs / l + tol_.rel * m1;
    return std::max(std::fabs(err[0]) / s0, std::fabs(err[1]) / s1);
  }

  Rhs rhs_;
  Tolerances tol_;
  double r_;
  State y_;
  State f_;
  double h_;
};

}  // namespace overdet::ode
