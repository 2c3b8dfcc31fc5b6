#ifndef WAVEGEOM_STRICHARTZ_HPP
#define WAVEGEOM_STRICHARTZ_HPP

// Mixed space-time norms of parametrix fields and the dyadic scaling law:
// for admissible (p, q) with r = 3/2 - 1/p - 3/q the level-j field obeys
// ||phi_j||_{L^p_[0,1] L^q} <= C 2^{jr} ||psi(2^-j .) f||_{L^2}, with target
// exponent r+1 for the gradient and r+2 for the second derivatives in the
// (4,4) case. Admissibility is decided in exact rational arithmetic; slice
// norms are euclidean-coordinate Riemann sums.

#include <optional>
#include <string>
#include <vector>

#include "wavegeom/parametrix.hpp"

namespace wavegeom {

// Exact rational with a small infinite flag (p = infinity is admissible).
struct Rational {
  long long num = 0;
  long long den = 1;
  bool infinite = false;

  static Rational make(long long n, long long d);
  static Rational inf() {
    Rational r;
    r.infinite = true;
    return r;
  }
  static Rational parse(const std::string& text);  // "4", "8/3", "inf"

  double value() const;
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b);
  bool operator<(const Rational& o) const;

  Rational reciprocal() const;  // 1/inf = 0
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
};

struct StrichartzPair {
  Rational p, q, r;  // r = 3/2 - 1/p - 3/q, exact
};

// Throws AdmissibilityError naming the violated constraint
// (q infinite, p < 2, q < 2, or 1/p + 1/q > 1/2).
StrichartzPair admissible(const Rational& p, const Rational& q);

// Non-throwing variant; returns the rejection reason instead.
std::optional<std::string> admissibility_rejection(const Rational& p, const Rational& q);

// Mixed L^p_t L^q_x norm of a sampled field on its tensor grid, by
// trapezoid-weighted Riemann sums in euclidean coordinates; infinite
// exponents take maxima. The pointwise modulus is the l2 norm over
// components (Frobenius with doubled off-diagonal weight for order 2).
double mixed_norm(const FieldSample& field, const StrichartzPair& pair);

// L^q norm of one t-slice (used by the report paths).
double slice_norm(const FieldSample& field, int it, const Rational& q);

struct LevelNorm {
  int j = 0;
  double norm = 0.0;       // mixed norm of the field
  double data_norm = 0.0;  // || psi(2^-j .) f ||_{L^2}
  double ratio = 0.0;      // norm / (2^{j r'} data_norm)
};

struct NormReport {
  StrichartzPair pair;
  int derivative_order = 0;
  double target_r = 0.0;  // r + derivative_order
  std::vector<LevelNorm> per_j;
  double slope = 0.0;     // least-squares fit of log2(norm/data_norm) vs j
  double residual = 0.0;  // rms residual of the fit
  double fitted_C = 0.0;  // ratio at the first level
  double max_ratio_excess = 0.0;  // max_j ratio_j / fitted_C - 1
  bool single_constant_ok = false;
  double tail_fraction = 0.0;  // boundary-shell share of the norm^max(p,q)
};

struct ScalingOptions {
  double window_radius = 2.0;   // spatial truncation [0, R] in radius
  double samples_per_osc = 8.0; // grid points per 2^-j in t and r
  int min_t_samples = 48;
  int min_r_samples = 64;
  double single_constant_tol = 0.05;
  int threads = 0;
};

// Radial-profile scaling sweep on the flat family (separable fields).
// derivative_order 0, 1, 2.
NormReport scaling_regression(const OpticalSolver& solver, const FrequencyProfile& profile,
                              const StrichartzPair& pair, const std::vector<int>& levels,
                              int derivative_order, const ScalingOptions& opt = {});

// Mixed norm of the separable flat radial field at one level (the building
// block of scaling_regression, exposed for convergence tests).
double flat_radial_mixed_norm(const ParametrixEvaluator& ev, const StrichartzPair& pair,
                              int derivative_order, const ScalingOptions& opt,
                              double* tail_fraction = nullptr);

}  // namespace wavegeom

#endif
