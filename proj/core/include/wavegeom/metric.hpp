#ifndef WAVEGEOM_METRIC_HPP
#define WAVEGEOM_METRIC_HPP

// Evaluable foliated Lorentzian metrics on [0,1] x R^3.
//
// Two built-in families:
//   minkowski  diag(-1,1,1,1)
//   bump       lapse/shift/spatial-strain perturbation of Minkowski, built
//              from a compactly supported C-infinity bump of amplitude
//              epsilon. Constructed in 3+1 form
//                  g_tt = -n^2 + h_ij beta^i beta^j,
//                  g_ti = h_ij beta^j,   g_ij = h_ij,
//              with n = 1 + eps*chi, beta = eps*chi*S, h = I + eps*chi*H,
//              chi(t,x) = cos(t) * B(|x - c| / w), B the unit bump.
//
// Every coordinate derivative of the components is available exactly via
// dual-number evaluation (scheme Analytic) or by central differences of the
// components (scheme CentralDifference) for cross-checks.

#include <array>
#include <string>

#include "wavegeom/dual.hpp"
#include "wavegeom/errors.hpp"
#include "wavegeom/vec.hpp"

namespace wavegeom {

enum class MetricKind { Minkowski, Perturbed };
enum class DerivScheme { Analytic, CentralDifference };

struct MetricSpec {
  std::string family = "minkowski";  // "minkowski" | "bump"
  double epsilon = 0.0;
  Vec3 bump_center{0.0, 0.0, 0.0};
  double bump_width = 2.0;
  double box_radius = 4.0;
  DerivScheme scheme = DerivScheme::Analytic;
  double fd_step = 1e-4;
  double epsilon_max = 0.1;
  int validation_points_per_axis = 7;
};

struct FoliationData {
  double lapse = 1.0;          // n, with n^{-1} = T(t)
  Vec4 normal{};               // T, unit future-oriented normal to the slice
  Mat3 induced;                // metric induced on the slice
  double volume_density = 1.0; // sqrt(det induced)
};

struct Christoffel {
  double g[4][4][4]{};  // g[a][b][c] = Gamma^a_{bc}
  double operator()(int a, int b, int c) const { return g[a][b][c]; }
};

struct VolumeReport {
  double n_min = 0.0;
  double n_max = 0.0;
  int samples = 0;
  bool within_bounds = false;  // [1/2, 2]
};

class SpacetimeMetric {
 public:
  // Validates the spec and the metric invariants (symmetry by construction,
  // Lorentzian signature, lapse in [1/2,2]) on a validation grid.
  // Throws SignatureError / LapseBoundError / ConfigError.
  static SpacetimeMetric make(const MetricSpec& spec);

  MetricKind kind() const { return kind_; }
  bool flat() const { return kind_ == MetricKind::Minkowski; }
  double epsilon() const { return spec_.epsilon; }
  const MetricSpec& spec() const { return spec_; }

  bool inside(double t, const Vec3& x, double margin = 0.0) const {
    return t >= -1e-12 && t <= 1.0 + 1e-12 && norm_inf(x) <= spec_.box_radius - margin;
  }
  void require_inside(double t, const Vec3& x) const;

  Mat4 components(double t, const Vec3& x) const;
  Mat4 inverse_components(double t, const Vec3& x) const;

  // dg[d](a,b) = partial_d g_{ab}; d ranges over (t, x1, x2, x3).
  std::array<Mat4, 4> derivatives(double t, const Vec3& x) const;

  FoliationData foliation(double t, const Vec3& x) const;

  Christoffel christoffel(double t, const Vec3& x) const;

  // Same, without the domain check; used by the ray integrator, which pads
  // the box (the families are bump perturbations, exactly flat outside).
  Christoffel christoffel_unchecked(double t, const Vec3& x) const;

  // Closed-form lapse of the family (oracle for the generic foliation path).
  double family_lapse(double t, const Vec3& x) const;

 private:
  explicit SpacetimeMetric(const MetricSpec& spec);

  template <class T>
  Mat4T<T> eval_components(const T& t, const Vec3T<T>& x) const;

  MetricSpec spec_;
  MetricKind kind_;
};

// Sweeps the lapse over a uniform grid on [0,1] x box and reports its range.
VolumeReport check_volume_comparison(const SpacetimeMetric& metric, int points_per_axis,
                                     int time_points);

}  // namespace wavegeom

#endif
