#ifndef WAVEGEOM_WINDOW_HPP
#define WAVEGEOM_WINDOW_HPP

// Dyadic frequency window. psi is a fixed C-infinity bump with support
// exactly [1/2, 2], normalized to peak value 1 (attained at 5/4):
//
//   psi(lam) = exp(32/9 - 4/q(lam)),   q(lam) = (2 lam - 1)(2 - lam).
//
// The window at level j is lam -> psi(2^-j lam), supported in
// [2^{j-1}, 2^{j+1}].

#include <cmath>

namespace wavegeom {

struct DyadicWindow {
  int j = 0;

  static double psi(double lam) {
    const double q = (2.0 * lam - 1.0) * (2.0 - lam);
    if (q <= 0.0) return 0.0;
    return std::exp(32.0 / 9.0 - 4.0 / q);
  }

  // d/dlam and d^2/dlam^2 of psi (closed forms; used for the kernel majorant
  // constant)
  static double psi_d1(double lam);
  static double psi_d2(double lam);

  double scale() const { return std::ldexp(1.0, j); }  // 2^j
  double eval(double lam) const { return psi(lam / scale()); }
};

// I0 = || psi^2 lam^2 ||_{L^1},  I2 = || (psi^2 lam^2)'' ||_{L^1}.
// The one-dimensional factor of the kernel obeys
// |int e^{i lam D} psi^2 lam^2 dlam| <= min(I0, I2 / D^2) <= C_psi / (1 + D^2)
// provided C_psi >= 2 max(I0, I2); see kernel.cpp.
double window_I0();
double window_I2();
double window_c_psi();

}  // namespace wavegeom

#endif
