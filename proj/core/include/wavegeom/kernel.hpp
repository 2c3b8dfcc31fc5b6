#ifndef WAVEGEOM_KERNEL_HPP
#define WAVEGEOM_KERNEL_HPP

// TT* kernel of the rescaled operator at dyadic level j:
//
//   K(t,x,s,y) = int_{S^2} int_0^inf e^{i lam 2^j [u(t/2^j,x/2^j,w) -
//                u(s/2^j,y/2^j,w)]} a(t/2^j,x/2^j,w) a(s/2^j,y/2^j,w)
//                psi(lam)^2 lam^2 dlam dw
//
// for pairs in the rescaled slab 2^j M = [0, 2^j] x R^3. The inner lambda
// integral is the one-dimensional factor k1(D) = int e^{i lam D} psi^2 lam^2
// dlam at D = 2^j phi; integrating by parts twice in lambda bounds it by
// C_psi / (1 + D^2), which integrated over the sphere is the reported
// majorant. In the flat case with unit amplitude the sphere integral
// collapses to
//
//   K = (4 pi / R) int e^{i lam tau} psi(lam)^2 lam sin(lam R) dlam,
//
// tau = s - t, R = |x - y| (rescaled variables); K is then independent of j.

#include <complex>
#include <functional>
#include <vector>

#include "wavegeom/eikonal.hpp"
#include "wavegeom/phase_geometry.hpp"
#include "wavegeom/window.hpp"

namespace wavegeom {

// amplitude a(t,x,omega) on the unrescaled slab; null means a == 1
using AmplitudeFn = std::function<double(double, const Vec3&, const Vec3&)>;

struct KernelConfig {
  int j = 4;
  AmplitudeFn amplitude;  // must satisfy |a| <= 1 (validated on samples)
};

struct RescaledPair {
  double t = 0.0;
  Vec3 x{};
  double s = 0.0;
  Vec3 y{};
};

struct KernelSample {
  RescaledPair pair;
  std::complex<double> value{};
  double ibp_majorant = 0.0;
  double dispersive_ratio = 0.0;  // |K| * |t - s|
  int n_theta = 0, n_phi = 0;     // sphere rule that the value settled on
};

struct KernelOptions {
  double rel_tol = 1e-4;
  double fail_tol = 1e-3;
  int max_doublings = 5;
  int min_theta = 16;
  int min_phi = 12;
  int lambda_min_nodes = 80;
  double pts_per_wavelength = 6.0;
  bool flat_fast_path = true;
};

class KernelEvaluator {
 public:
  KernelEvaluator(const OpticalSolver& solver, KernelConfig config, KernelOptions opt = {});

  int level() const { return config_.j; }
  const OpticalSolver& solver() const { return *solver_; }

  // value + majorant + ratio in one sphere sweep
  KernelSample eval(const RescaledPair& pair) const;

  std::complex<double> value_generic(const RescaledPair& pair) const;
  // reduced 1-D path: flat metric, unit amplitude
  std::complex<double> value_flat_reduced(const RescaledPair& pair) const;
  bool has_fast_path() const;

  double majorant(const RescaledPair& pair) const;

  // unrescaled point mapped into [0,1] x box; throws OutOfDomainError
  void require_in_slab(const RescaledPair& pair) const;

 private:
  std::complex<double> k1(double D, int nodes) const;  // 1-D lambda factor
  double phase_span(const RescaledPair& pair) const;

  const OpticalSolver* solver_;
  KernelConfig config_;
  KernelOptions opt_;
};

struct DecayPoint {
  double tau = 0.0;      // rescaled |t - s|
  double max_abs_k = 0.0;
  double max_ratio = 0.0;
  int n_pairs = 0;
};

struct RegionDecay {
  Region region = Region::OnS;
  std::vector<DecayPoint> points;
  double slope = 0.0;      // log-log fit of max|K| against tau
  double max_ratio = 0.0;  // sup of |K| tau over the ladder
};

struct DecayRow {
  Region region = Region::OnS;
  double tau = 0.0;
  double frac = 1.0;   // |y - x| / tau
  RescaledPair pair;
  double abs_k = 0.0;
  double majorant = 0.0;
  double ratio = 0.0;
};

struct DispersiveReport {
  int j = 0;
  double epsilon = 0.0;
  std::vector<RegionDecay> regions;  // OnS, Interior, Exterior
  std::vector<DecayRow> rows;        // every evaluated pair
  double majorant_violation = 0.0;   // max of (|K| - majorant), tolerance-adjusted
};

struct DecayLadderConfig {
  std::vector<double> taus;  // rescaled separations
  // near-boundary fractions |y-x|/tau drive the slope fit (the 1/tau law is
  // the envelope near the geodesic sphere); deep fractions decay faster and
  // enter the ratio / majorant checks only
  std::vector<double> interior_fracs = {0.95, 0.98, 0.995};
  std::vector<double> interior_extra_fracs = {0.0, 0.6};
  std::vector<double> exterior_fracs = {1.02, 1.05, 1.12};
  std::vector<double> exterior_extra_fracs = {1.5, 2.0};
  double base_t = 0.0;  // unrescaled start time
  Vec3 base_x{};        // unrescaled spatial base point
  Vec3 direction{0.0, 0.0, 1.0};
  bool classify = true;  // verify each pair's region by decomposition
};

DispersiveReport check_dispersive(const KernelEvaluator& kernel,
                                  const DecayLadderConfig& ladder);

struct RescalingProbe {
  double t = 0.0;  // unrescaled probe point
  Vec3 x{};
  std::complex<double> lhs{};  // U_j h (t, x), direct unrescaled quadrature
  std::complex<double> rhs{};  // 2^{-j} (A h_j)(2^j t, 2^j x) via the kernel
  double rel_error = 0.0;
};

struct RescalingReport {
  int j = 0;
  std::vector<RescalingProbe> probes;
  double max_rel_error = 0.0;
};

// Two-path check of the rescaling identity on a compactly supported test
// function h (gaussian bump at (h_t0, h_x0) with width h_w, truncated to its
// 3-sigma box), evaluated at the given unrescaled probe points.
RescalingReport check_rescaling(const KernelEvaluator& kernel,
                                const std::vector<std::pair<double, Vec3>>& probes,
                                double h_t0, const Vec3& h_x0, double h_w,
                                int outer_nodes_per_axis = 8);

}  // namespace wavegeom

#endif
