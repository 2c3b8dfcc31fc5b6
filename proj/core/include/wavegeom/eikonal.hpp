#ifndef WAVEGEOM_EIKONAL_HPP
#define WAVEGEOM_EIKONAL_HPP

// Optical function u(t,x,omega) by the method of characteristics.
//
// With initial data u(0,x,omega) = x . omega on the initial slice, u and its
// sphere-derivative are constant along the null rays generated by the
// spacetime gradient of u. Evaluation at (t,x,omega) locates the foot point
// x0 of the ray through (t,x) on the initial slice by a contraction
// iteration on the forward ray map, then reads off
//     u = x0 . omega,    d_omega u = (x0 . e1, x0 . e2),
// and recovers the null lapse b, the unit normal N and the null pair
// L' (ray tangent), L = b L' = T + N from the transported tangent.
//
// On the Minkowski family everything collapses to closed forms; the solver
// uses them when flat_closed_form is enabled (the generic path remains
// available for cross-checks).

#include <vector>

#include "wavegeom/metric.hpp"
#include "wavegeom/sphere.hpp"
#include "wavegeom/vec.hpp"

namespace wavegeom {

struct SolverOptions {
  double ray_rtol = 1e-11;
  double ray_atol = 1e-13;
  double locate_tol = 5e-13;   // |X(t;x0) - x| target for the foot-point solve
  int max_locate_iters = 60;
  double omega_fd_delta = 1e-4;  // sphere finite-difference step
  bool flat_closed_form = true;
  double ray_padding = 1.25;   // rays may leave the box by this margin
};

struct GeodesicSample {
  double sigma;       // time-function parameter, t = t_base + sigma
  double t;
  Vec3 x;
  Vec4 tangent;       // affine tangent; equals b^{-1} L at the sample
  double null_defect; // |g(tangent, tangent)|
};

struct NullGeodesic {
  Vec3 omega;
  double t0 = 0.0;
  Vec3 x0;
  std::vector<GeodesicSample> samples;
  double max_null_defect() const;
  double max_time_param_defect() const;  // max |t(sample) - (t0 + sigma)|
};

struct RegularityReport {
  double sup_b_minus_1 = 0.0;
  double sup_domega_b = 0.0;
  double sup_gram_deviation = 0.0;   // max entrywise |g(dN,dN) - I2|
  double sup_g_N_domega_N = 0.0;     // max |g(N, d_omega N)|
  double ad1_ratio_min = 1.0;        // |N(.,w)-N(.,w')| / |w-w'| over pairs
  double ad1_ratio_max = 1.0;
  int n_points = 0;
  int n_directions = 0;
  int n_pairs = 0;
};

struct GlobalCoordReport {
  bool injective = true;
  double min_image_gap = 0.0;    // smallest image distance among tested pairs
  double sqrt_det_min = 1.0;     // sqrt(det g) in (u, d_omega u) coordinates
  double sqrt_det_max = 1.0;
  int n_points = 0;
};

struct GridSpec {
  double t0 = 0.0, t1 = 1.0;
  int nt = 2;
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};
  int nx = 2, ny = 2, nz = 2;

  std::size_t npoints() const {
    return static_cast<std::size_t>(nt) * nx * ny * nz;
  }
  double time(int it) const { return nt == 1 ? t0 : t0 + (t1 - t0) * it / (nt - 1.0); }
  Vec3 point(int ix, int iy, int iz) const {
    auto c = [](double lo, double hi, int i, int n) {
      return n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    };
    return {c(lo[0], hi[0], ix, nx), c(lo[1], hi[1], iy, ny), c(lo[2], hi[2], iz, nz)};
  }
  std::size_t index(int it, int ix, int iy, int iz) const {
    return ((static_cast<std::size_t>(it) * nx + ix) * ny + iy) * nz + iz;
  }
};

// Grid snapshot of the solved field for one direction (serializable).
struct OpticalField {
  GridSpec grid;
  Vec3 omega;
  double epsilon = 0.0;
  int chart = 0;
  std::vector<double> u, domega_u1, domega_u2, b, N1, N2, N3;
};

class OpticalSolver {
 public:
  explicit OpticalSolver(const SpacetimeMetric& metric, SolverOptions opt = {});

  const SpacetimeMetric& metric() const { return *metric_; }
  const SolverOptions& options() const { return opt_; }

  struct PointData {
    double u = 0.0;
    Vec2 domega_u{};
    double b = 1.0;
    Vec3 N{};
    Vec4 L{};       // T + N
    Vec4 Lprime{};  // spacetime gradient of u (affine ray tangent)
    Vec3 x0{};      // foot point on the initial slice
    int chart = 0;  // tangent-frame chart used for d_omega u
  };

  // Full optical data at one point. Throws OutOfDomainError, DomainExitError,
  // CausticError (foot-point solve fails to contract), StepFailure.
  PointData evaluate(double t, const Vec3& x, const Vec3& omega) const;

  double u(double t, const Vec3& x, const Vec3& omega) const {
    return evaluate(t, x, omega).u;
  }

  // Null geodesic from base, parametrized by the time function, with the
  // stated number of equally spaced samples (includes both endpoints).
  NullGeodesic shoot(double t_base, const Vec3& x_base, const Vec3& omega, double sigma_end,
                     int n_samples) const;

  // Sphere finite differences at a fixed point, all in the frame at omega.
  struct OmegaDerivatives {
    Vec2 domega_b{};
    Vec3 domega_N[2]{};
    Mat2 gram;             // g(d_omega N, d_omega N), induced metric
    Vec2 g_N_domega_N{};   // g(N, d_omega N)
    TangentFrame frame;
  };
  OmegaDerivatives omega_derivatives(double t, const Vec3& x, const Vec3& omega) const;

  // |g^{ab} d_a u d_b u| with du from central differences of u (step h).
  double eikonal_residual_fd(double t, const Vec3& x, const Vec3& omega, double h) const;

 private:
  struct RayEnd {
    Vec3 x;
    Vec4 v;
  };
  Vec4 initial_tangent(const Vec3& x0, const Vec3& omega) const;
  RayEnd integrate_ray(const Vec3& x0, const Vec3& omega, double t_end,
                       std::vector<GeodesicSample>* samples = nullptr,
                       int n_samples = 0) const;
  Vec3 locate_foot_point(double t, const Vec3& x, const Vec3& omega, RayEnd* end) const;

  const SpacetimeMetric* metric_;
  SolverOptions opt_;
};

RegularityReport verify_regularity(const OpticalSolver& solver,
                                   const std::vector<Vec3>& directions,
                                   const std::vector<Vec3>& points, double t,
                                   double min_pair_angle_sep = 0.1);

GlobalCoordReport check_global_coordinates(const OpticalSolver& solver, const Vec3& omega,
                                           double t, const std::vector<Vec3>& cloud,
                                           double min_point_sep = 1e-3);

OpticalField sample_optical_field(const OpticalSolver& solver, const Vec3& omega,
                                  const GridSpec& grid, int threads = 0);

// Smallest contraction ratio of a bundle of rays started on a lattice of the
// given spacing: values well below 1 indicate focusing (caustic formation).
double min_ray_separation_ratio(const OpticalSolver& solver, const Vec3& omega,
                                double spacing, double extent, int per_axis, double t);

}  // namespace wavegeom

#endif
