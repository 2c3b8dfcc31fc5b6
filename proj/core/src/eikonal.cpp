#include "wavegeom/eikonal.hpp"

#include <cmath>
#include <sstream>

#include "wavegeom/ode.hpp"
#include "wavegeom/parallel.hpp"

namespace wavegeom {

double NullGeodesic::max_null_defect() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.null_defect);
  return m;
}

double NullGeodesic::max_time_param_defect() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.t - (t0 + s.sigma)));
  return m;
}

OpticalSolver::OpticalSolver(const SpacetimeMetric& metric, SolverOptions opt)
    : metric_(&metric), opt_(opt) {}

// Covector (du) on the initial slice has spatial part omega; the time part is
// the root of the null quadratic with the orientation convention T(u) < 0.
Vec4 OpticalSolver::initial_tangent(const Vec3& x0, const Vec3& omega) const {
  const Mat4 ginv = metric_->inverse_components(0.0, x0);
  const double A = ginv(0, 0);
  double B = 0.0, C = 0.0;
  for (int i = 0; i < 3; ++i) {
    B += ginv(0, i + 1) * omega[i];
    for (int j = 0; j < 3; ++j) C += ginv(i + 1, j + 1) * omega[i] * omega[j];
  }
  const double disc = B * B - A * C;
  if (disc <= 0.0) throw SignatureError("null quadratic has no real root on initial slice");
  const double sq = std::sqrt(disc);
  // Stable quadratic roots of A p^2 + 2 B p + C = 0.
  const double q = -(B + (B >= 0 ? sq : -sq));
  const double r1 = q / A;
  const double r2 = C / q;
  const FoliationData fol = metric_->foliation(0.0, x0);
  double pt = r1;
  {
    // pick the root with T(u) < 0
    Vec4 du1{r1, omega[0], omega[1], omega[2]};
    double Tu1 = 0.0;
    for (int a = 0; a < 4; ++a) Tu1 += fol.normal[a] * du1[a];
    if (Tu1 >= 0.0) pt = r2;
  }
  const Vec4 du{pt, omega[0], omega[1], omega[2]};
  Vec4 v;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) v[a] += ginv(a, b) * du[b];
  return v;
}

OpticalSolver::RayEnd OpticalSolver::integrate_ray(const Vec3& x0, const Vec3& omega,
                                                   double t_end,
                                                   std::vector<GeodesicSample>* samples,
                                                   int n_samples) const {
  const double r_wall = metric_->spec().box_radius + opt_.ray_padding;
  const Vec4 v0 = initial_tangent(x0, omega);

  if (metric_->flat() && opt_.flat_closed_form) {
    // Straight line; sampled exactly.
    auto at = [&](double t) {
      RayEnd e;
      e.v = v0;
      e.x = x0 + v0.spatial() * (t / v0[0]);
      if (norm_inf(e.x) > r_wall)
        throw DomainExitError("ray left the padded box");
      return e;
    };
    if (samples) {
      samples->clear();
      for (int k = 0; k < n_samples; ++k) {
        const double t = t_end * k / std::max(1, n_samples - 1);
        const RayEnd e = at(t);
        const double defect = std::abs(bilinear(metric_->components(t, e.x), e.v, e.v));
        samples->push_back({t, t, e.x, e.v, defect});
      }
    }
    return at(t_end);
  }

  OdeState<7> y{x0[0], x0[1], x0[2], v0[0], v0[1], v0[2], v0[3]};
  auto rhs = [&](double t, const OdeState<7>& s, OdeState<7>& dydt) {
    const Vec3 x{s[0], s[1], s[2]};
    const Vec4 v{s[3], s[4], s[5], s[6]};
    if (norm_inf(x) > r_wall)
      throw DomainExitError("ray left the padded box during integration");
    const Christoffel G = metric_->christoffel_unchecked(t, x);
    const double inv_vt = 1.0 / v[0];
    for (int i = 0; i < 3; ++i) dydt[i] = v[i + 1] * inv_vt;
    for (int a = 0; a < 4; ++a) {
      double acc = 0.0;
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) acc += G(a, b, c) * v[b] * v[c];
      dydt[3 + a] = -acc * inv_vt;
    }
  };

  OdeOptions oo;
  oo.rtol = opt_.ray_rtol;
  oo.atol = opt_.ray_atol;
  oo.initial_step = 0.05;

  std::function<void(double, const OdeState<7>&)> observer;
  if (samples) {
    samples->clear();
    // re-integrate piecewise to land exactly on sample times
    OdeState<7> cur = y;
    double t_prev = 0.0;
    for (int k = 0; k < n_samples; ++k) {
      const double t = t_end * k / std::max(1, n_samples - 1);
      if (k > 0) cur = integrate_ode<7>(rhs, t_prev, t, cur, oo);
      t_prev = t;
      const Vec3 x{cur[0], cur[1], cur[2]};
      const Vec4 v{cur[3], cur[4], cur[5], cur[6]};
      const double defect = std::abs(bilinear(metric_->components(t, x), v, v));
      samples->push_back({t, t, x, v, defect});
    }
    const auto& last = samples->back();
    return {last.x, last.tangent};
  }

  const OdeState<7> yf = integrate_ode<7>(rhs, 0.0, t_end, y, oo);
  return {{yf[0], yf[1], yf[2]}, {yf[3], yf[4], yf[5], yf[6]}};
}

// Foot-point solve: the forward map F(x0) = X(t; x0) is a perturbation of
// x0 + t*direction, so x0 <- x0 - (F(x0) - x) contracts at rate O(epsilon).
Vec3 OpticalSolver::locate_foot_point(double t, const Vec3& x, const Vec3& omega,
                                      RayEnd* end) const {
  Vec3 x0 = x - omega * t;  // flat preimage
  double prev_res = 1e300;
  int stalls = 0;
  for (int iter = 0; iter < opt_.max_locate_iters; ++iter) {
    const RayEnd e = integrate_ray(x0, omega, t);
    const Vec3 res = e.x - x;
    const double rn = norm(res);
    if (rn <= opt_.locate_tol) {
      if (end) *end = e;
      return x0;
    }
    if (rn >= 0.5 * prev_res) {
      if (++stalls >= 4)
        throw CausticError(
            "foot-point iteration stopped contracting (possible caustic or too large "
            "perturbation); residual " +
            std::to_string(rn));
    } else {
      stalls = 0;
    }
    prev_res = rn;
    x0 += -res;
  }
  throw CausticError("foot-point iteration did not converge within budget");
}

OpticalSolver::PointData OpticalSolver::evaluate(double t, const Vec3& x,
                                                 const Vec3& omega) const {
  metric_->require_inside(t, x);
  PointData pd;
  const TangentFrame f = frame_at(omega);
  pd.chart = f.chart;

  if (metric_->flat() && opt_.flat_closed_form) {
    pd.x0 = x - omega * t;
    pd.u = -t + dot(x, omega);
    pd.domega_u = {dot(pd.x0, f.e1), dot(pd.x0, f.e2)};
    pd.b = 1.0;
    pd.N = omega;
    pd.L = {1.0, omega[0], omega[1], omega[2]};
    pd.Lprime = pd.L;
    return pd;
  }

  RayEnd end;
  if (t == 0.0) {
    pd.x0 = x;
    end.x = x;
    end.v = initial_tangent(x, omega);
  } else {
    pd.x0 = locate_foot_point(t, x, omega, &end);
  }
  pd.u = dot(pd.x0, omega);
  pd.domega_u = {dot(pd.x0, f.e1), dot(pd.x0, f.e2)};
  pd.Lprime = end.v;

  const FoliationData fol = metric_->foliation(t, x);
  const double binv = fol.lapse * end.v[0];  // b^{-1} = -T(u) = n v^t
  if (binv < 1e-8) throw DegenerateGradientError("optical gradient degenerate: |grad u| < 1e-8");
  pd.b = 1.0 / binv;
  const Vec4 L4{pd.b * end.v[0], pd.b * end.v[1], pd.b * end.v[2], pd.b * end.v[3]};
  pd.L = L4;
  pd.N = {L4[1] - fol.normal[1], L4[2] - fol.normal[2], L4[3] - fol.normal[3]};
  return pd;
}

NullGeodesic OpticalSolver::shoot(double t_base, const Vec3& x_base, const Vec3& omega,
                                  double sigma_end, int n_samples) const {
  metric_->require_inside(t_base, x_base);
  if (n_samples < 2) n_samples = 2;
  NullGeodesic geo;
  geo.omega = omega;
  geo.t0 = t_base;
  geo.x0 = x_base;

  // Reduce to a ray from the initial slice through the base point.
  Vec3 foot = x_base;
  if (t_base != 0.0) {
    if (metric_->flat() && opt_.flat_closed_form)
      foot = x_base - omega * t_base;
    else
      foot = locate_foot_point(t_base, x_base, omega, nullptr);
  }

  std::vector<GeodesicSample> all;
  const double t_end = t_base + sigma_end;
  if (t_end < -1e-12 || t_end > 1.0 + 1e-12)
    throw OutOfDomainError("geodesic endpoint time outside [0,1]");

  if (t_base == 0.0) {
    integrate_ray(foot, omega, t_end, &all, n_samples);
    for (auto& s : all) s.sigma = s.t - t_base;
    geo.samples = std::move(all);
  } else {
    // sample on [t_base, t_end] by integrating from the initial slice once,
    // then on to each sample time
    std::vector<GeodesicSample> dummy;
    integrate_ray(foot, omega, t_base, &dummy, 2);
    // now integrate the remaining span with samples
    std::vector<GeodesicSample> seg;
    const RayEnd base_end{dummy.back().x, dummy.back().tangent};
    // integrate piecewise from base
    OdeOptions oo;
    oo.rtol = opt_.ray_rtol;
    oo.atol = opt_.ray_atol;
    const double r_wall = metric_->spec().box_radius + opt_.ray_padding;
    auto rhs = [&](double t, const OdeState<7>& s, OdeState<7>& dydt) {
      const Vec3 x{s[0], s[1], s[2]};
      const Vec4 v{s[3], s[4], s[5], s[6]};
      if (norm_inf(x) > r_wall) throw DomainExitError("ray left the padded box");
      const Christoffel G = metric_->christoffel_unchecked(t, x);
      const double inv_vt = 1.0 / v[0];
      for (int i = 0; i < 3; ++i) dydt[i] = v[i + 1] * inv_vt;
      for (int a = 0; a < 4; ++a) {
        double acc = 0.0;
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) acc += G(a, b, c) * v[b] * v[c];
        dydt[3 + a] = -acc * inv_vt;
      }
    };
    OdeState<7> cur{base_end.x[0], base_end.x[1], base_end.x[2], base_end.v[0],
                    base_end.v[1], base_end.v[2], base_end.v[3]};
    double t_prev = t_base;
    for (int k = 0; k < n_samples; ++k) {
      const double sig = sigma_end * k / (n_samples - 1.0);
      const double t = t_base + sig;
      if (k > 0 && metric_->flat() && opt_.flat_closed_form) {
        const Vec4 v{cur[3], cur[4], cur[5], cur[6]};
        for (int i = 0; i < 3; ++i) cur[i] += v[i + 1] / v[0] * (t - t_prev);
      } else if (k > 0) {
        cur = integrate_ode<7>(rhs, t_prev, t, cur, oo);
      }
      t_prev = t;
      const Vec3 x{cur[0], cur[1], cur[2]};
      const Vec4 v{cur[3], cur[4], cur[5], cur[6]};
      const double defect = std::abs(bilinear(metric_->components(t, x), v, v));
      seg.push_back({sig, t, x, v, defect});
    }
    geo.samples = std::move(seg);
  }
  return geo;
}

OpticalSolver::OmegaDerivatives OpticalSolver::omega_derivatives(double t, const Vec3& x,
                                                                 const Vec3& omega) const {
  OmegaDerivatives od;
  od.frame = frame_at(omega);
  if (metric_->flat() && opt_.flat_closed_form) {
    // N = omega exactly, so its sphere derivatives are the frame vectors
    od.domega_N[0] = od.frame.e1;
    od.domega_N[1] = od.frame.e2;
    od.gram(0, 0) = od.gram(1, 1) = 1.0;
    return od;
  }
  const double d = opt_.omega_fd_delta;
  const FoliationData fol = metric_->foliation(t, x);
  const Vec3 e[2] = {od.frame.e1, od.frame.e2};
  const PointData center = evaluate(t, x, omega);
  Vec3 dN[2];
  for (int k = 0; k < 2; ++k) {
    const PointData plus = evaluate(t, x, rotate_towards(omega, e[k], d));
    const PointData minus = evaluate(t, x, rotate_towards(omega, e[k], -d));
    od.domega_b[k] = (plus.b - minus.b) / (2.0 * d);
    dN[k] = (plus.N - minus.N) / (2.0 * d);
    od.domega_N[k] = dN[k];
  }
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) od.gram(k, l) = bilinear(fol.induced, dN[k], dN[l]);
    od.g_N_domega_N[k] = bilinear(fol.induced, center.N, dN[k]);
  }
  return od;
}

double OpticalSolver::eikonal_residual_fd(double t, const Vec3& x, const Vec3& omega,
                                          double h) const {
  Vec4 du;
  du[0] = (u(t + h, x, omega) - u(t - h, x, omega)) / (2.0 * h);
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    du[i + 1] = (u(t, xp, omega) - u(t, xm, omega)) / (2.0 * h);
  }
  const Mat4 ginv = metric_->inverse_components(t, x);
  double res = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) res += ginv(a, b) * du[a] * du[b];
  return std::abs(res);
}

RegularityReport verify_regularity(const OpticalSolver& solver,
                                   const std::vector<Vec3>& directions,
                                   const std::vector<Vec3>& points, double t,
                                   double min_pair_angle_sep) {
  RegularityReport rep;
  rep.n_points = static_cast<int>(points.size());
  rep.n_directions = static_cast<int>(directions.size());
  rep.ad1_ratio_min = 1e300;
  rep.ad1_ratio_max = -1e300;

  std::vector<std::vector<Vec3>> N(points.size(), std::vector<Vec3>(directions.size()));
  std::vector<double> sup_bm1(points.size(), 0.0), sup_db(points.size(), 0.0),
      sup_gram(points.size(), 0.0), sup_gN(points.size(), 0.0);

  parallel_for(points.size(), [&](std::size_t p) {
    for (std::size_t w = 0; w < directions.size(); ++w) {
      const auto pd = solver.evaluate(t, points[p], directions[w]);
      N[p][w] = pd.N;
      sup_bm1[p] = std::max(sup_bm1[p], std::abs(pd.b - 1.0));
      const auto od = solver.omega_derivatives(t, points[p], directions[w]);
      sup_db[p] = std::max({sup_db[p], std::abs(od.domega_b[0]), std::abs(od.domega_b[1])});
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          sup_gram[p] =
              std::max(sup_gram[p], std::abs(od.gram(a, b) - (a == b ? 1.0 : 0.0)));
      sup_gN[p] = std::max({sup_gN[p], std::abs(od.g_N_domega_N[0]),
                            std::abs(od.g_N_domega_N[1])});
    }
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    rep.sup_b_minus_1 = std::max(rep.sup_b_minus_1, sup_bm1[p]);
    rep.sup_domega_b = std::max(rep.sup_domega_b, sup_db[p]);
    rep.sup_gram_deviation = std::max(rep.sup_gram_deviation, sup_gram[p]);
    rep.sup_g_N_domega_N = std::max(rep.sup_g_N_domega_N, sup_gN[p]);
    const Mat3 h = solver.metric().foliation(t, points[p]).induced;
    for (std::size_t a = 0; a < directions.size(); ++a)
      for (std::size_t b = a + 1; b < directions.size(); ++b) {
        const double sep = norm(directions[a] - directions[b]);
        if (sep < min_pair_angle_sep) continue;
        const Vec3 dN = N[p][a] - N[p][b];
        const double ratio = std::sqrt(bilinear(h, dN, dN)) / sep;
        rep.ad1_ratio_min = std::min(rep.ad1_ratio_min, ratio);
        rep.ad1_ratio_max = std::max(rep.ad1_ratio_max, ratio);
        ++rep.n_pairs;
      }
  }
  return rep;
}

GlobalCoordReport check_global_coordinates(const OpticalSolver& solver, const Vec3& omega,
                                           double t, const std::vector<Vec3>& cloud,
                                           double min_point_sep) {
  GlobalCoordReport rep;
  rep.n_points = static_cast<int>(cloud.size());
  rep.min_image_gap = 1e300;
  rep.sqrt_det_min = 1e300;
  rep.sqrt_det_max = -1e300;

  std::vector<Vec3> image(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    const auto pd = solver.evaluate(t, cloud[i], omega);
    image[i] = {pd.u, pd.domega_u[0], pd.domega_u[1]};
  });

  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double dx = norm(cloud[i] - cloud[j]);
      if (dx < min_point_sep) continue;
      const double gap = norm(image[i] - image[j]);
      rep.min_image_gap = std::min(rep.min_image_gap, gap);
      if (gap < 1e-9 * dx) {
        rep.injective = false;
        std::ostringstream os;
        os << "coordinate collision between cloud points " << i << " and " << j
           << " (|x_i - x_j| = " << dx << ", image gap = " << gap << ")";
        throw CoordinateCollisionError(os.str());
      }
    }

  // Jacobian of x -> (u, d_omega u) by central differences; the volume
  // element in the image coordinates is sqrt(det h) / |det J|.
  const double h = 1e-4;
  std::vector<double> sd(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    Mat3 J;
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = cloud[i], xm = cloud[i];
      xp[c] += h;
      xm[c] -= h;
      const auto p = solver.evaluate(t, xp, omega);
      const auto m = solver.evaluate(t, xm, omega);
      J(0, c) = (p.u - m.u) / (2.0 * h);
      J(1, c) = (p.domega_u[0] - m.domega_u[0]) / (2.0 * h);
      J(2, c) = (p.domega_u[1] - m.domega_u[1]) / (2.0 * h);
    }
    const double dJ = std::abs(det(J));
    if (dJ < 1e-12) throw DegenerateGradientError("coordinate map Jacobian degenerate");
    const double dh = det(solver.metric().foliation(t, cloud[i]).induced);
    sd[i] = std::sqrt(dh) / dJ;
  });
  for (double v : sd) {
    rep.sqrt_det_min = std::min(rep.sqrt_det_min, v);
    rep.sqrt_det_max = std::max(rep.sqrt_det_max, v);
  }
  return rep;
}

OpticalField sample_optical_field(const OpticalSolver& solver, const Vec3& omega,
                                  const GridSpec& grid, int threads) {
  OpticalField f;
  f.grid = grid;
  f.omega = omega;
  f.epsilon = solver.metric().epsilon();
  f.chart = frame_at(omega).chart;
  const std::size_t n = grid.npoints();
  f.u.resize(n);
  f.domega_u1.resize(n);
  f.domega_u2.resize(n);
  f.b.resize(n);
  f.N1.resize(n);
  f.N2.resize(n);
  f.N3.resize(n);
  parallel_for(
      static_cast<std::size_t>(grid.nt), [&](std::size_t it) {
        const double t = grid.time(static_cast<int>(it));
        for (int ix = 0; ix < grid.nx; ++ix)
          for (int iy = 0; iy < grid.ny; ++iy)
            for (int iz = 0; iz < grid.nz; ++iz) {
              const auto pd = solver.evaluate(t, grid.point(ix, iy, iz), omega);
              const std::size_t k = grid.index(static_cast<int>(it), ix, iy, iz);
              f.u[k] = pd.u;
              f.domega_u1[k] = pd.domega_u[0];
              f.domega_u2[k] = pd.domega_u[1];
              f.b[k] = pd.b;
              f.N1[k] = pd.N[0];
              f.N2[k] = pd.N[1];
              f.N3[k] = pd.N[2];
            }
      },
      threads);
  return f;
}

double min_ray_separation_ratio(const OpticalSolver& solver, const Vec3& omega,
                                double spacing, double extent, int per_axis, double t) {
  std::vector<Vec3> starts, ends;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int k = 0; k < per_axis; ++k)
        starts.push_back({-extent + i * spacing, -extent + j * spacing,
                          -extent + k * spacing});
  ends.resize(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    const auto geo = solver.shoot(0.0, starts[i], omega, t, 2);
    ends[i] = geo.samples.back().x;
  });
  double min_ratio = 1e300;
  auto idx = [&](int i, int j, int k) { return (i * per_axis + j) * per_axis + k; };
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j)
      for (int k = 0; k < per_axis; ++k) {
        if (i + 1 < per_axis)
          min_ratio = std::min(min_ratio,
                               norm(ends[idx(i + 1, j, k)] - ends[idx(i, j, k)]) / spacing);
        if (j + 1 < per_axis)
          min_ratio = std::min(min_ratio,
                               norm(ends[idx(i, j + 1, k)] - ends[idx(i, j, k)]) / spacing);
        if (k + 1 < per_axis)
          min_ratio = std::min(min_ratio,
                               norm(ends[idx(i, j, k + 1)] - ends[idx(i, j, k)]) / spacing);
      }
  return min_ratio;
}

}  // namespace wavegeom
