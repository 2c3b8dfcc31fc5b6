#include "wavegeom/window.hpp"

#include <algorithm>

#include "wavegeom/quadrature.hpp"

namespace wavegeom {

namespace {

// q and its derivatives for psi = exp(32/9 - 4/q)
inline double qfun(double lam) { return (2.0 * lam - 1.0) * (2.0 - lam); }
inline double qd1(double lam) { return -4.0 * lam + 5.0; }
constexpr double qd2 = -4.0;

}  // namespace

double DyadicWindow::psi_d1(double lam) {
  const double q = qfun(lam);
  if (q <= 0.0) return 0.0;
  // psi' = psi * 4 q' / q^2
  return psi(lam) * 4.0 * qd1(lam) / (q * q);
}

double DyadicWindow::psi_d2(double lam) {
  const double q = qfun(lam);
  if (q <= 0.0) return 0.0;
  const double g1 = 4.0 * qd1(lam) / (q * q);  // (log psi)'
  const double g2 = 4.0 * (qd2 * q - 2.0 * qd1(lam) * qd1(lam)) / (q * q * q);
  return psi(lam) * (g1 * g1 + g2);
}

namespace {

double integrate_abs(double (*f)(double), int panels, int per_panel) {
  const auto rule = composite_gauss_legendre(0.5, 2.0, panels, per_panel);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += std::abs(f(rule.nodes[i])) * rule.weights[i];
  return acc;
}

double F0(double lam) {
  const double p = DyadicWindow::psi(lam);
  return p * p * lam * lam;
}

// (psi^2 lam^2)'' expanded with the closed-form psi derivatives
double F2(double lam) {
  const double p = DyadicWindow::psi(lam);
  const double p1 = DyadicWindow::psi_d1(lam);
  const double p2 = DyadicWindow::psi_d2(lam);
  return 2.0 * (p1 * p1 + p * p2) * lam * lam + 8.0 * p * p1 * lam + 2.0 * p * p;
}

}  // namespace

double window_I0() {
  static const double v = integrate_abs(&F0, 64, 10);
  return v;
}

double window_I2() {
  static const double v = integrate_abs(&F2, 64, 10);
  return v;
}

double window_c_psi() { return std::max(window_I0(), window_I2()); }

}  // namespace wavegeom
