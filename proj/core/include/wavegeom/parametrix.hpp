#ifndef WAVEGEOM_PARAMETRIX_HPP
#define WAVEGEOM_PARAMETRIX_HPP

// Frequency-localized parametrix
//
//   phi_j(t,x) = int_{S^2} int_0^inf e^{i lam u(t,x,w)} psi(2^-j lam)
//                f(lam w) lam^2 dlam dw
//
// and its first and second spatial derivatives, evaluated by product
// quadrature (sphere rule x composite Gauss-Legendre in lambda). On the
// Minkowski family with u = -t + x.w the sphere integral collapses by the
// plane-wave expansion to one-dimensional integrals against spherical
// Bessel weights; that reduced path is the default when available and the
// full product quadrature remains as the generic route (the two are
// cross-checked in the tests and the acceptance suite).

#include <array>
#include <complex>

#include "wavegeom/eikonal.hpp"
#include "wavegeom/profile.hpp"
#include "wavegeom/window.hpp"

namespace wavegeom {

struct ParametrixOptions {
  double rel_tol = 1e-4;        // refinement target per reported value
  double fail_tol = 1e-3;       // change above this after refinement -> error
  int max_doublings = 4;
  double pts_per_wavelength = 6.0;
  int min_theta = 12;
  int min_phi = 8;
  int lambda_min_nodes = 80;
  bool flat_fast_path = true;
  double hessian_fd_step = 1e-3;  // step for grad(u) differences (generic path)
};

// Grid snapshot of phi_j or a derivative field. Components are point-major:
// values[p * ncomp + c]. Order 0: 1 component; order 1: (x1,x2,x3); order 2:
// symmetric (xx,xy,xz,yy,yz,zz).
struct FieldSample {
  GridSpec grid;
  int j = 0;
  int derivative_order = 0;
  int ncomp = 1;
  std::vector<std::complex<double>> values;
};

class ParametrixEvaluator {
 public:
  ParametrixEvaluator(const OpticalSolver& solver, DyadicWindow window,
                      FrequencyProfile profile, ParametrixOptions opt = {});

  const DyadicWindow& window() const { return window_; }
  const FrequencyProfile& profile() const { return profile_; }
  const ParametrixOptions& options() const { return opt_; }
  int level() const { return window_.j; }

  bool has_fast_path(int order) const;

  // preferred route: reduced one-dimensional path when available,
  // otherwise the generic product quadrature
  std::complex<double> value(double t, const Vec3& x) const;
  std::array<std::complex<double>, 3> gradient(double t, const Vec3& x) const;
  std::array<std::complex<double>, 6> hessian(double t, const Vec3& x) const;

  // generic product quadrature (any metric); refinement-controlled, throws
  // UnderresolvedError when the doubling budget is exhausted
  std::complex<double> value_generic(double t, const Vec3& x) const;
  std::array<std::complex<double>, 3> gradient_generic(double t, const Vec3& x) const;
  std::array<std::complex<double>, 6> hessian_generic(double t, const Vec3& x) const;

  // reduced flat path (requires has_fast_path)
  std::complex<double> value_flat(double t, const Vec3& x) const;
  std::array<std::complex<double>, 3> gradient_flat(double t, const Vec3& x) const;
  std::array<std::complex<double>, 6> hessian_flat(double t, const Vec3& x) const;

  // pointwise modulus of the field / derivative norms for the separable
  // flat radial case: |phi_j|, |grad phi_j|_2, |hess phi_j|_F at radius r
  double flat_radial_abs(double t, double r, int order) const;

  // lambda-rule nodes used at radius r (for resolution reporting)
  int lambda_nodes(double t, double r) const;

  // upper envelope 4*pi int psi(2^-j lam) |radial| lam^{2+order} dlam; the
  // reference magnitude for relative quadrature-error control
  double envelope(int order) const;

 private:
  std::complex<double> lambda_integral_flat(double t, double r, int power,
                                            int bessel_kind) const;

  const OpticalSolver* solver_;
  DyadicWindow window_;
  FrequencyProfile profile_;
  ParametrixOptions opt_;
};

FieldSample sample_parametrix(const ParametrixEvaluator& ev, const GridSpec& grid, int order,
                              int threads = 0);

}  // namespace wavegeom

#endif
