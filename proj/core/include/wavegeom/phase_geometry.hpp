#ifndef WAVEGEOM_PHASE_GEOMETRY_HPP
#define WAVEGEOM_PHASE_GEOMETRY_HPP

// Geometry of the phase phi(t,x,s,y,omega) = u(t,x,omega) - u(s,y,omega)
// for a fixed pair of points with t < s:
//
//   * maximal difference m0 = max_omega (u(s,y,.) - u(t,x,.)) and its
//     maximizer omega0 (coarse icosahedral scan + Newton polish on the
//     sphere),
//   * trichotomy of (s,y) into the geodesic sphere S (m0 = 0), its interior
//     (m0 < 0) and exterior (m0 > 0),
//   * the zero set D of phi, parametrized by theta1(azimuth) in spherical
//     coordinates about omega0 (exterior case),
//   * the connecting curves mu (interior) and eta (exterior), whose
//     endpoints recover (s,y),
//   * the four phase lower bounds with their constants.

#include <vector>

#include "wavegeom/eikonal.hpp"

namespace wavegeom {

struct PhasePair {
  double t = 0.0;
  Vec3 x{};
  double s = 1.0;
  Vec3 y{};
};

enum class Region { OnS, Interior, Exterior };

struct DecomposeOptions {
  int scan_level = 2;             // icosahedral scan: 162 directions
  int polish_iters = 10;
  double polish_grad_delta = 3e-4;
  double polish_hess_delta = 3e-3;
  double grad_tol = 3e-8;
  double tol_region_factor = 1e-5;  // tol_region = factor * (s - t)
  double ambiguity_sep = 0.1;       // angular separation flagging co-maximizers
  int n_azimuth = 64;               // theta1 curve sampling (exterior)
};

struct PhaseDecomposition {
  PhasePair pair;
  double m0 = 0.0;
  Vec3 omega0{};
  Region region = Region::OnS;
  double tol_region = 0.0;
  bool maximizer_ambiguous = false;
  std::vector<Vec3> co_maximizers;

  // exterior-only payload
  TangentFrame frame0;            // frame at omega0, defines the azimuth
  std::vector<double> theta1_az;  // sampled theta1 over uniform azimuths
  Vec3 omega1_az0{};              // D-point on the azimuth-0 meridian
  Vec2 v0{};                      // d_omega u(s,y,w1) - d_omega u(gamma_{w1}(s-t),w1)
};

double phase(const OpticalSolver& solver, const PhasePair& pair, const Vec3& omega);

PhaseDecomposition decompose(const OpticalSolver& solver, const PhasePair& pair,
                             const DecomposeOptions& opt = {});

// Root of phi along the meridian at the given azimuth (radians) about
// decomp.omega0; also reports the number of sign changes seen while
// bracketing (exactly one for a faithful D-curve).
double theta1_on_meridian(const OpticalSolver& solver, const PhasePair& pair,
                          const PhaseDecomposition& decomp, double azimuth,
                          int* sign_changes = nullptr);

inline Vec3 meridian_direction(const PhaseDecomposition& decomp, double azimuth,
                               double theta) {
  return direction_from_axis(decomp.omega0, decomp.frame0, theta, azimuth);
}

// v0 at an arbitrary D-point (2-vector in the frame at omega1).
Vec2 eta_velocity(const OpticalSolver& solver, const PhasePair& pair, const Vec3& omega1);

struct CurveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  int n_samples = 9;
  double gram_condition_limit = 1e6;
  double defect_error_factor = 10.0;  // endpoint error threshold = factor * rtol
  bool check_identities = true;
};

struct ConnectingCurve {
  enum class Kind { Mu, Eta };
  Kind kind = Kind::Mu;
  Vec2 coefficient{};  // a = gram^{-1} d_omega b at the start (mu), a1 (eta)
  std::vector<std::pair<double, Vec3>> samples;  // (sigma, point on Sigma_s)
  double endpoint_defect = 0.0;
  double max_u_defect = 0.0;       // transport identity along the curve
  double max_domega_defect = 0.0;  // mu: constancy; eta: affine law
};

ConnectingCurve integrate_mu(const OpticalSolver& solver, const PhasePair& pair,
                             const PhaseDecomposition& decomp, const CurveOptions& opt = {});

ConnectingCurve integrate_eta(const OpticalSolver& solver, const PhasePair& pair,
                              const PhaseDecomposition& decomp, const Vec3& omega1,
                              const CurveOptions& opt = {});

enum class LemmaCase { OnS, Interior, ExtFar, ExtNear };

struct KeyLemmaSample {
  Vec3 omega{};
  double theta = 0.0;
  double theta1 = 0.0;  // NaN for the sphere/interior cases
  Vec3 omega1{};
  double alpha = 0.0;   // angle between v0 and omega1 - omega (exterior)
  double alpha_expected = 0.0;  // |theta1 - theta| / 2
  double phi_value = 0.0;
  double bound_value = 0.0;
  double margin = 0.0;  // |phi| - bound
  LemmaCase lemma_case = LemmaCase::OnS;
};

struct KeyLemmaOptions {
  double case4_constant = 1.0;  // calibrated on flat configurations
  double tol_factor = 1e-8;     // violation tolerance = factor * (s - t)
  bool throw_on_violation = false;
  bool compute_alpha = true;
};

std::vector<KeyLemmaSample> check_key_lemma(const OpticalSolver& solver,
                                            const PhasePair& pair,
                                            const PhaseDecomposition& decomp,
                                            const std::vector<Vec3>& omegas,
                                            const KeyLemmaOptions& opt = {});

// Smallest ratio |phi| / (sqrt((1-cos(theta-theta1))/(1-cos theta1)) * m0)
// over near-side samples of one exterior pair; calibrates the fourth bound.
double fit_case4_constant(const OpticalSolver& solver, const PhasePair& pair,
                          const PhaseDecomposition& decomp, int n_theta, int n_azimuth);

}  // namespace wavegeom

#endif
