#include "wavegeom/phase_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavegeom/ode.hpp"

namespace wavegeom {

namespace {

void require_pair(const OpticalSolver& solver, const PhasePair& pair) {
  if (!(pair.t < pair.s))
    throw OutOfDomainError("phase pair requires t < s strictly");
  solver.metric().require_inside(pair.t, pair.x);
  solver.metric().require_inside(pair.s, pair.y);
}

// u(s,y,.) - u(t,x,.), the function maximized over the sphere (= -phi)
double delta_u(const OpticalSolver& solver, const PhasePair& pair, const Vec3& omega) {
  return solver.u(pair.s, pair.y, omega) - solver.u(pair.t, pair.x, omega);
}

double gram_condition(const Mat2& g) {
  const double tr = g(0, 0) + g(1, 1);
  const double dt = det(g);
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  if (lmin <= 0.0) return 1e300;
  return lmax / lmin;
}

Vec2 solve_gram(const Mat2& g, const Vec2& rhs, double condition_limit) {
  if (gram_condition(g) > condition_limit)
    throw GramSingularError("gram matrix g(dN,dN) ill conditioned");
  Mat2 inv;
  if (!invert(g, inv)) throw GramSingularError("gram matrix singular");
  return {inv(0, 0) * rhs[0] + inv(0, 1) * rhs[1], inv(1, 0) * rhs[0] + inv(1, 1) * rhs[1]};
}

}  // namespace

double phase(const OpticalSolver& solver, const PhasePair& pair, const Vec3& omega) {
  require_pair(solver, pair);
  return solver.u(pair.t, pair.x, omega) - solver.u(pair.s, pair.y, omega);
}

PhaseDecomposition decompose(const OpticalSolver& solver, const PhasePair& pair,
                             const DecomposeOptions& opt) {
  require_pair(solver, pair);
  PhaseDecomposition dec;
  dec.pair = pair;
  dec.tol_region = opt.tol_region_factor * (pair.s - pair.t);

  // coarse scan
  const auto grid = icosphere_directions(opt.scan_level);
  std::vector<double> vals(grid.size());
  double best = -1e300;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = delta_u(solver, pair, grid[i]);
    if (vals[i] > best) {
      best = vals[i];
      best_i = i;
    }
  }

  // co-maximizers well separated from the best grid node
  const double value_tol = std::max(1e-12, 1e-9 * (pair.s - pair.t));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (vals[i] >= best - value_tol && norm(grid[i] - grid[best_i]) > opt.ambiguity_sep) {
      dec.maximizer_ambiguous = true;
      if (dec.co_maximizers.size() < 12) dec.co_maximizers.push_back(grid[i]);
    }
  }

  // Newton polish on the sphere via finite-difference gradient/Hessian in
  // tangent coordinates. Falls back to small ascent steps when the Hessian
  // degenerates (flat interior with y = x has a whole sphere of maximizers).
  Vec3 w = grid[best_i];
  double fw = best;
  const double dg = opt.polish_grad_delta;
  const double dh = opt.polish_hess_delta;
  for (int it = 0; it < opt.polish_iters; ++it) {
    const TangentFrame f = frame_at(w);
    auto feval = [&](double a, double b) {
      const Vec3 p = w + f.e1 * a + f.e2 * b;
      return delta_u(solver, pair, normalized(p));
    };
    const double g1 = (feval(dg, 0) - feval(-dg, 0)) / (2 * dg);
    const double g2 = (feval(0, dg) - feval(0, -dg)) / (2 * dg);
    const double gn = std::sqrt(g1 * g1 + g2 * g2);
    if (gn <= opt.grad_tol) break;
    const double f0 = fw;
    const double h11 = (feval(dh, 0) + feval(-dh, 0) - 2 * f0) / (dh * dh);
    const double h22 = (feval(0, dh) + feval(0, -dh) - 2 * f0) / (dh * dh);
    const double h12 =
        (feval(dh, dh) + feval(-dh, -dh) - feval(dh, -dh) - feval(-dh, dh)) / (4 * dh * dh);
    const double detH = h11 * h22 - h12 * h12;
    Vec2 step;
    if (std::abs(detH) < 1e-10 || detH < 0.0 || h11 > 0.0) {
      step = {g1 * 0.1, g2 * 0.1};  // not locally concave; plain ascent
    } else {
      step = {-(h22 * g1 - h12 * g2) / detH, -(-h12 * g1 + h11 * g2) / detH};
    }
    const double sn = norm(step);
    if (sn > 0.4) step = step * (0.4 / sn);
    const Vec3 cand = normalized(w + f.e1 * step[0] + f.e2 * step[1]);
    const double fc = delta_u(solver, pair, cand);
    if (fc < fw - 1e-13) break;  // no longer improving; keep the best seen
    w = cand;
    fw = std::max(fw, fc);
  }
  dec.omega0 = w;
  dec.m0 = fw;

  if (dec.m0 > dec.tol_region)
    dec.region = Region::Exterior;
  else if (dec.m0 < -dec.tol_region)
    dec.region = Region::Interior;
  else
    dec.region = Region::OnS;

  dec.frame0 = frame_at(dec.omega0);

  if (dec.region == Region::Exterior) {
    dec.theta1_az.resize(opt.n_azimuth);
    for (int k = 0; k < opt.n_azimuth; ++k) {
      const double az = 2.0 * 3.14159265358979324 * k / opt.n_azimuth;
      dec.theta1_az[k] = theta1_on_meridian(solver, pair, dec, az);
    }
    dec.omega1_az0 = meridian_direction(dec, 0.0, dec.theta1_az[0]);
    dec.v0 = eta_velocity(solver, pair, dec.omega1_az0);
  }
  return dec;
}

double theta1_on_meridian(const OpticalSolver& solver, const PhasePair& pair,
                          const PhaseDecomposition& decomp, double azimuth,
                          int* sign_changes) {
  if (decomp.region != Region::Exterior)
    throw OutOfDomainError("theta1 is defined for exterior pairs only");
  auto fdel = [&](double theta) {
    return delta_u(solver, pair, meridian_direction(decomp, azimuth, theta));
  };
  // bracket the (unique) sign change of phi along the meridian
  const int n_scan = 48;
  const double pi = 3.14159265358979324;
  double lo = 0.0, hi = pi;
  double flo = decomp.m0;
  int changes = 0;
  bool bracketed = false;
  for (int i = 1; i <= n_scan; ++i) {
    const double th = pi * i / n_scan;
    const double f = fdel(th);
    if (flo > 0.0 && f <= 0.0) {
      if (!bracketed) {
        lo = pi * (i - 1) / n_scan;
        hi = th;
        bracketed = true;
      }
      ++changes;
    } else if (flo <= 0.0 && f > 0.0) {
      ++changes;
    }
    flo = f;
  }
  if (sign_changes) *sign_changes = changes;
  if (!bracketed)
    throw BoundViolationError("no sign change of phi found along meridian (azimuth " +
                              std::to_string(azimuth) + ")");
  // bisection with secant acceleration
  double a = lo, b = hi, fa = fdel(a), fb = fdel(b);
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    double m = 0.5 * (a + b);
    const double sec = b - fb * (b - a) / (fb - fa);
    if (sec > a + 0.1 * (b - a) && sec < b - 0.1 * (b - a)) m = sec;
    const double fm = fdel(m);
    if ((fa > 0.0) == (fm > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

Vec2 eta_velocity(const OpticalSolver& solver, const PhasePair& pair, const Vec3& omega1) {
  // d_omega u is transported along the omega1-ray, so its value at
  // gamma_{omega1}(s-t) equals the value at (t,x)
  const auto at_y = solver.evaluate(pair.s, pair.y, omega1);
  const auto at_x = solver.evaluate(pair.t, pair.x, omega1);
  return at_y.domega_u - at_x.domega_u;
}

ConnectingCurve integrate_mu(const OpticalSolver& solver, const PhasePair& pair,
                             const PhaseDecomposition& decomp, const CurveOptions& opt) {
  if (decomp.region != Region::Interior)
    throw OutOfDomainError("mu curve requires an interior pair");
  ConnectingCurve curve;
  curve.kind = ConnectingCurve::Kind::Mu;
  const Vec3 w0 = decomp.omega0;
  const double s = pair.s;

  const auto geo = solver.shoot(pair.t, pair.x, w0, s - pair.t, 2);
  const Vec3 start = geo.samples.back().x;

  auto rhs = [&](double, const OdeState<3>& y, OdeState<3>& d) {
    const Vec3 z{y[0], y[1], y[2]};
    const auto pd = solver.evaluate(s, z, w0);
    const auto od = solver.omega_derivatives(s, z, w0);
    const Vec2 a = solve_gram(od.gram, od.domega_b, opt.gram_condition_limit);
    const Vec3 v = pd.N * pd.b + od.domega_N[0] * a[0] + od.domega_N[1] * a[1];
    d[0] = v[0];
    d[1] = v[1];
    d[2] = v[2];
  };
  {
    const auto od0 = solver.omega_derivatives(s, start, w0);
    curve.coefficient = solve_gram(od0.gram, od0.domega_b, opt.gram_condition_limit);
  }

  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  oo.initial_step = std::max(1e-3, std::abs(decomp.m0) / 16.0);

  OdeState<3> z{start[0], start[1], start[2]};
  const int n = std::max(2, opt.n_samples);
  curve.samples.reserve(n);
  curve.samples.emplace_back(0.0, start);
  for (int k = 1; k < n; ++k) {
    const double s0 = decomp.m0 * (k - 1) / (n - 1.0);
    const double s1 = decomp.m0 * k / (n - 1.0);
    z = integrate_ode<3>(rhs, s0, s1, z, oo);
    curve.samples.emplace_back(s1, Vec3{z[0], z[1], z[2]});
  }
  curve.endpoint_defect = norm(curve.samples.back().second - pair.y);

  if (opt.check_identities) {
    const auto base = solver.evaluate(pair.t, pair.x, w0);
    for (const auto& [sig, p] : curve.samples) {
      const auto pd = solver.evaluate(s, p, w0);
      curve.max_u_defect = std::max(curve.max_u_defect, std::abs(pd.u - (sig + base.u)));
      curve.max_domega_defect =
          std::max(curve.max_domega_defect, norm(pd.domega_u - base.domega_u));
    }
  }
  if (curve.endpoint_defect > opt.defect_error_factor * opt.rtol) {
    std::ostringstream os;
    os << "mu endpoint defect " << curve.endpoint_defect << " exceeds "
       << opt.defect_error_factor << " x rtol";
    throw EndpointDefectError(os.str());
  }
  return curve;
}

ConnectingCurve integrate_eta(const OpticalSolver& solver, const PhasePair& pair,
                              const PhaseDecomposition& decomp, const Vec3& omega1,
                              const CurveOptions& opt) {
  if (decomp.region != Region::Exterior)
    throw OutOfDomainError("eta curve requires an exterior pair");
  ConnectingCurve curve;
  curve.kind = ConnectingCurve::Kind::Eta;
  const double s = pair.s;

  const auto geo = solver.shoot(pair.t, pair.x, omega1, s - pair.t, 2);
  const Vec3 start = geo.samples.back().x;
  const Vec2 v0 = eta_velocity(solver, pair, omega1);

  auto rhs = [&](double, const OdeState<3>& y, OdeState<3>& d) {
    const Vec3 z{y[0], y[1], y[2]};
    const auto pd = solver.evaluate(s, z, omega1);
    const auto od = solver.omega_derivatives(s, z, omega1);
    const Vec2 a1 = solve_gram(od.gram, v0, opt.gram_condition_limit);
    const Vec3 v = (od.domega_N[0] * a1[0] + od.domega_N[1] * a1[1]) * pd.b;
    d[0] = v[0];
    d[1] = v[1];
    d[2] = v[2];
  };
  {
    const auto od0 = solver.omega_derivatives(s, start, omega1);
    curve.coefficient = solve_gram(od0.gram, v0, opt.gram_condition_limit);
  }

  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  oo.initial_step = 1.0 / 16.0;

  OdeState<3> z{start[0], start[1], start[2]};
  const int n = std::max(2, opt.n_samples);
  curve.samples.emplace_back(0.0, start);
  for (int k = 1; k < n; ++k) {
    const double s0 = (k - 1) / (n - 1.0);
    const double s1 = k / (n - 1.0);
    z = integrate_ode<3>(rhs, s0, s1, z, oo);
    curve.samples.emplace_back(s1, Vec3{z[0], z[1], z[2]});
  }
  curve.endpoint_defect = norm(curve.samples.back().second - pair.y);

  if (opt.check_identities) {
    const auto at_y = solver.evaluate(pair.s, pair.y, omega1);
    const auto at_x = solver.evaluate(pair.t, pair.x, omega1);
    for (const auto& [sig, p] : curve.samples) {
      const auto pd = solver.evaluate(s, p, omega1);
      curve.max_u_defect = std::max(curve.max_u_defect, std::abs(pd.u - at_y.u));
      const Vec2 affine = at_x.domega_u + v0 * sig;
      curve.max_domega_defect =
          std::max(curve.max_domega_defect, norm(pd.domega_u - affine));
    }
  }
  if (curve.endpoint_defect > opt.defect_error_factor * opt.rtol) {
    std::ostringstream os;
    os << "eta endpoint defect " << curve.endpoint_defect << " exceeds "
       << opt.defect_error_factor << " x rtol";
    throw EndpointDefectError(os.str());
  }
  return curve;
}

namespace {

KeyLemmaSample make_sample(const OpticalSolver& solver, const PhasePair& pair,
                           const PhaseDecomposition& decomp, const Vec3& omega,
                           const Vec3& omega0, Region region, const KeyLemmaOptions& opt) {
  KeyLemmaSample ks;
  ks.omega = omega;
  ks.phi_value = solver.u(pair.t, pair.x, omega) - solver.u(pair.s, pair.y, omega);
  ks.theta = angle_between(omega, omega0);
  ks.theta1 = std::nan("");
  ks.alpha = std::nan("");
  ks.alpha_expected = std::nan("");
  const double tau = pair.s - pair.t;

  if (region == Region::OnS) {
    ks.lemma_case = LemmaCase::OnS;
    const Vec3 d = omega - omega0;
    ks.bound_value = 0.25 * tau * dot(d, d);
  } else if (region == Region::Interior) {
    ks.lemma_case = LemmaCase::Interior;
    const Vec3 d = omega - omega0;
    ks.bound_value = 0.125 * tau * dot(d, d);
  } else {
    double az = 0.0;
    if (ks.theta > 1e-12 && ks.theta < 3.14159265358979324 - 1e-12) {
      const Vec3 perp = omega - omega0 * dot(omega, omega0);
      az = std::atan2(dot(perp, decomp.frame0.e2), dot(perp, decomp.frame0.e1));
    }
    ks.theta1 = theta1_on_meridian(solver, pair, decomp, az);
    const Vec3 w1 = meridian_direction(decomp, az, ks.theta1);
    ks.omega1 = w1;
    if (ks.theta >= ks.theta1) {
      ks.lemma_case = LemmaCase::ExtFar;
      const Vec3 d = omega - w1;
      ks.bound_value = 0.25 * tau * dot(d, d);
    } else {
      ks.lemma_case = LemmaCase::ExtNear;
      const double ratio =
          std::sqrt((1.0 - std::cos(ks.theta - ks.theta1)) / (1.0 - std::cos(ks.theta1)));
      ks.bound_value = opt.case4_constant * ratio * decomp.m0;
    }
    if (opt.compute_alpha && norm(omega - w1) > 1e-8) {
      const Vec2 v0 = eta_velocity(solver, pair, w1);
      const TangentFrame f1 = frame_at(w1);
      const Vec3 v0_3d = f1.e1 * v0[0] + f1.e2 * v0[1];
      if (norm(v0_3d) > 1e-12) {
        // chord oriented so that its inner product with v0 is nonnegative:
        // omega - omega1 on the near side, omega1 - omega on the far side
        const Vec3 chord = ks.theta < ks.theta1 ? omega - w1 : w1 - omega;
        ks.alpha = angle_between(v0_3d, chord);
        ks.alpha_expected = 0.5 * std::abs(ks.theta1 - ks.theta);
      }
    }
  }
  ks.margin = std::abs(ks.phi_value) - ks.bound_value;
  if (opt.throw_on_violation && ks.margin < -opt.tol_factor * tau) {
    std::ostringstream os;
    os << "phase lower bound violated: |phi| = " << std::abs(ks.phi_value)
       << " < bound = " << ks.bound_value << " (case " << static_cast<int>(ks.lemma_case)
       << ", theta = " << ks.theta << ")";
    throw BoundViolationError(os.str());
  }
  return ks;
}

}  // namespace

std::vector<KeyLemmaSample> check_key_lemma(const OpticalSolver& solver,
                                            const PhasePair& pair,
                                            const PhaseDecomposition& decomp,
                                            const std::vector<Vec3>& omegas,
                                            const KeyLemmaOptions& opt) {
  std::vector<KeyLemmaSample> out;
  out.reserve(omegas.size());
  for (const auto& w : omegas)
    out.push_back(make_sample(solver, pair, decomp, w, decomp.omega0, decomp.region, opt));
  // a degenerate interior maximizer is not unique; the bound must hold with
  // omega0 replaced by every flagged co-maximizer
  if (decomp.region == Region::Interior && decomp.maximizer_ambiguous) {
    for (const auto& w0 : decomp.co_maximizers)
      for (const auto& w : omegas)
        out.push_back(make_sample(solver, pair, decomp, w, w0, Region::Interior, opt));
  }
  return out;
}

double fit_case4_constant(const OpticalSolver& solver, const PhasePair& pair,
                          const PhaseDecomposition& decomp, int n_theta, int n_azimuth) {
  if (decomp.region != Region::Exterior)
    throw OutOfDomainError("case-4 calibration requires an exterior pair");
  double cmin = 1e300;
  for (int j = 0; j < n_azimuth; ++j) {
    const double az = 2.0 * 3.14159265358979324 * j / n_azimuth;
    const double th1 = theta1_on_meridian(solver, pair, decomp, az);
    for (int i = 0; i < n_theta; ++i) {
      const double th = th1 * i / n_theta;  // [0, theta1)
      const Vec3 w = meridian_direction(decomp, az, th);
      const double phi = std::abs(phase(solver, pair, w));
      const double ratio = std::sqrt((1.0 - std::cos(th - th1)) / (1.0 - std::cos(th1)));
      if (ratio * decomp.m0 > 1e-14) cmin = std::min(cmin, phi / (ratio * decomp.m0));
    }
  }
  return cmin;
}

}  // namespace wavegeom
