#ifndef WAVEGEOM_ODE_HPP
#define WAVEGEOM_ODE_HPP

// Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4)) on
// fixed-size states. Steps are clipped so the final point lands exactly on
// the requested endpoint; an optional observer sees every accepted step.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "wavegeom/errors.hpp"

namespace wavegeom {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-2;
  double min_step = 1e-14;
  std::size_t max_steps = 200000;
};

template <std::size_t N>
using OdeState = std::array<double, N>;

// Integrates y' = f(t, y) from t0 to t1 (t1 may be below t0). The observer,
// if given, is called as observer(t, y) after every accepted step including
// the initial state. Throws StepFailure when error control stalls.
template <std::size_t N, class Rhs>
OdeState<N> integrate_ode(Rhs&& f, double t0, double t1, OdeState<N> y,
                          const OdeOptions& opt = {},
                          const std::function<void(double, const OdeState<N>&)>& observer = {}) {
  // Dormand-Prince RK5(4)7M coefficients.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(opt.initial_step), std::abs(t1 - t0));
  if (h == 0.0) {
    if (observer) observer(t, y);
    return y;
  }
  if (observer) observer(t, y);

  OdeState<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  f(t, y, k1);

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = ei / sc;
      err += r * r;
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      if (observer) observer(t, y);
      if (t == t1 || dir * (t1 - t) <= 0.0) return y;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < opt.min_step)
      throw StepFailure("ode step size underflow at t=" + std::to_string(t));
  }
  throw StepFailure("ode exceeded max step budget");
}

}  // namespace wavegeom

#endif
