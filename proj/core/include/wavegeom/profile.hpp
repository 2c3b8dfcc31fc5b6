#ifndef WAVEGEOM_PROFILE_HPP
#define WAVEGEOM_PROFILE_HPP

// Test-profile registry for the frequency-space data f(lam w) =
// radial(lam) * angular(w): a radial factor and a low real spherical
// harmonic (orthonormal, l <= 2). The windowed L^2 norm
// || psi(2^-j lam) f ||_{L^2(R^3)} is computed by quadrature.

#include <complex>
#include <string>

#include "wavegeom/errors.hpp"
#include "wavegeom/vec.hpp"
#include "wavegeom/window.hpp"

namespace wavegeom {

struct FrequencyProfile {
  std::string radial = "one";     // "one" | "invsqrt" | "inv"
  std::string angular = "const";  // "const" | "y10" | "y11" | "y1m1" | "y20" | "y22"
  double amplitude = 1.0;

  static FrequencyProfile parse(const std::string& radial, const std::string& angular,
                                double amplitude = 1.0);

  double radial_eval(double lam) const;
  double angular_eval(const Vec3& w) const;
  int angular_degree() const;  // l (0 for "const")

  double angular_l2() const;  // int angular^2 dw
  double angular_l4() const;  // int angular^4 dw

  // || psi(2^-j lam) f ||_{L^2(R^3)}
  double data_norm(const DyadicWindow& window) const;

  // profile scaled so that data_norm(window) == 1
  FrequencyProfile normalized(const DyadicWindow& window) const;
};

// Spherical Bessel functions of the first kind (series near 0).
double sph_j0(double x);
double sph_j1(double x);
double sph_j2(double x);
double sph_jl(int l, double x);
// j0'' (used by the closed flat reduction of second derivatives)
double sph_j0_dd(double x);
// j1(x)/x, stable at 0
double sph_j1_over_x(double x);

}  // namespace wavegeom

#endif
