#ifndef WAVEGEOM_QUADRATURE_HPP
#define WAVEGEOM_QUADRATURE_HPP

// Quadrature rules for the oscillatory integrals: Gauss-Legendre in 1-D
// (plain and composite panels), and a product rule on the unit sphere
// (Gauss-Legendre in cos(theta) x uniform trapezoid in phi) with a free
// choice of polar axis. The product rule integrates spherical harmonics of
// degree < n_theta exactly in theta and azimuthal modes < n_phi exactly.

#include <complex>
#include <functional>
#include <vector>

#include "wavegeom/errors.hpp"
#include "wavegeom/sphere.hpp"
#include "wavegeom/vec.hpp"

namespace wavegeom {

struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; results are cached per n.
const QuadRule1D& gauss_legendre(int n);

// Gauss-Legendre transplanted to [a, b].
QuadRule1D gauss_legendre_on(double a, double b, int n);

// Composite Gauss-Legendre: `panels` equal panels of `per_panel` nodes each.
QuadRule1D composite_gauss_legendre(double a, double b, int panels, int per_panel);

template <class F>
auto integrate(const QuadRule1D& rule, F&& f) -> decltype(f(0.0)) {
  decltype(f(0.0)) acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += f(rule.nodes[i]) * rule.weights[i];
  return acc;
}

// Node count for resolving exp(i * phase) whose total phase range is `range`
// radians, at `pts_per_wavelength` points per 2*pi of phase.
inline int oscillatory_node_count(double range, int minimum = 8,
                                  double pts_per_wavelength = 6.0) {
  const double waves = std::abs(range) / 6.283185307179586;
  const int n = static_cast<int>(std::ceil(pts_per_wavelength * waves)) + minimum;
  return n;
}

struct SphereNode {
  Vec3 dir;
  double weight;  // weights sum to 4*pi
};

struct SphereRule {
  std::vector<SphereNode> nodes;
  int n_theta = 0;
  int n_phi = 0;

  template <class F>
  auto integrate(F&& f) const -> decltype(f(Vec3{})) {
    decltype(f(Vec3{})) acc{};
    for (const auto& n : nodes) acc += f(n.dir) * n.weight;
    return acc;
  }
};

// Product rule with poles along `axis`.
SphereRule sphere_rule(const Vec3& axis, int n_theta, int n_phi);

// Convergence-controlled evaluation: evaluates `value` on a rule, then on a
// doubled rule, doubling until the relative change is below rel_tol or the
// budget is exhausted (throws UnderresolvedError in that case).
// `scale` provides the magnitude used for relative comparison (pass 0 to use
// the magnitude of the current value).
std::complex<double> refine_to_tolerance(
    const std::function<std::complex<double>(const SphereRule&)>& value, const Vec3& axis,
    int n_theta0, int n_phi0, double rel_tol, int max_doublings, double scale = 0.0,
    double* achieved_rel_change = nullptr);

}  // namespace wavegeom

#endif
