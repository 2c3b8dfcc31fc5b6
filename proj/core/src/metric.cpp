#include "wavegeom/metric.hpp"

#include <cmath>
#include <sstream>

namespace wavegeom {

namespace {

// Unit bump: B(0) = 1, support exactly [-1, 1], C-infinity.
template <class T>
T unit_bump(const T& rho2) {
  using std::exp;
  if (value_of(rho2) >= 1.0) return T(0.0);
  return exp(T(1.0) - T(1.0) / (T(1.0) - rho2));
}

// Fixed family constants: shift direction and spatial strain. Chosen once so
// that lapse, shift and all strain components are exercised; the overall size
// is controlled by epsilon alone.
constexpr double kShift[3] = {0.30, -0.20, 0.10};
constexpr double kStrain[3][3] = {{0.50, 0.20, 0.00},
                                  {0.20, -0.30, 0.10},
                                  {0.00, 0.10, 0.25}};

}  // namespace

SpacetimeMetric::SpacetimeMetric(const MetricSpec& spec) : spec_(spec) {
  kind_ = (spec.family == "minkowski" || spec.epsilon == 0.0) ? MetricKind::Minkowski
                                                              : MetricKind::Perturbed;
}

template <class T>
Mat4T<T> SpacetimeMetric::eval_components(const T& t, const Vec3T<T>& x) const {
  Mat4T<T> g;
  g(0, 0) = T(-1.0);
  g(1, 1) = T(1.0);
  g(2, 2) = T(1.0);
  g(3, 3) = T(1.0);
  if (kind_ == MetricKind::Minkowski) return g;

  const double w = spec_.bump_width;
  Vec3T<T> rel = x;
  rel[0] = rel[0] - T(spec_.bump_center[0]);
  rel[1] = rel[1] - T(spec_.bump_center[1]);
  rel[2] = rel[2] - T(spec_.bump_center[2]);
  using std::cos;
  const T rho2 = dot(rel, rel) / T(w * w);
  const T chi = cos(t) * unit_bump(rho2);
  const T amp = T(spec_.epsilon) * chi;

  const T n = T(1.0) + amp;
  T beta[3], h[3][3];
  for (int i = 0; i < 3; ++i) beta[i] = amp * T(kShift[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = T(i == j ? 1.0 : 0.0) + amp * T(kStrain[i][j]);

  T beta_low[3];  // h_ij beta^j
  for (int i = 0; i < 3; ++i) {
    beta_low[i] = T(0.0);
    for (int j = 0; j < 3; ++j) beta_low[i] += h[i][j] * beta[j];
  }
  T beta2(0.0);
  for (int i = 0; i < 3; ++i) beta2 += beta_low[i] * beta[i];

  g(0, 0) = -(n * n) + beta2;
  for (int i = 0; i < 3; ++i) {
    g(0, i + 1) = beta_low[i];
    g(i + 1, 0) = beta_low[i];
    for (int j = 0; j < 3; ++j) g(i + 1, j + 1) = h[i][j];
  }
  return g;
}

Mat4 SpacetimeMetric::components(double t, const Vec3& x) const {
  return eval_components<double>(t, x);
}

Mat4 SpacetimeMetric::inverse_components(double t, const Vec3& x) const {
  Mat4 inv;
  if (!invert(components(t, x), inv))
    throw SignatureError("metric components degenerate at sample point");
  return inv;
}

std::array<Mat4, 4> SpacetimeMetric::derivatives(double t, const Vec3& x) const {
  std::array<Mat4, 4> dg{};
  if (kind_ == MetricKind::Minkowski) return dg;
  if (spec_.scheme == DerivScheme::Analytic) {
    const Dual4 td = Dual4::variable(t, 0);
    const Vec3T<Dual4> xd{Dual4::variable(x[0], 1), Dual4::variable(x[1], 2),
                          Dual4::variable(x[2], 3)};
    const Mat4T<Dual4> g = eval_components<Dual4>(td, xd);
    for (int d = 0; d < 4; ++d)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) dg[d](a, b) = g(a, b).d[d];
    return dg;
  }
  const double h = spec_.fd_step;
  for (int d = 0; d < 4; ++d) {
    double tp = t, tm = t;
    Vec3 xp = x, xm = x;
    if (d == 0) {
      tp += h;
      tm -= h;
    } else {
      xp[d - 1] += h;
      xm[d - 1] -= h;
    }
    const Mat4 gp = components(tp, xp);
    const Mat4 gm = components(tm, xm);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) dg[d](a, b) = (gp(a, b) - gm(a, b)) / (2.0 * h);
  }
  return dg;
}

FoliationData SpacetimeMetric::foliation(double t, const Vec3& x) const {
  FoliationData fd;
  const Mat4 g = components(t, x);
  const Mat4 ginv = inverse_components(t, x);
  if (ginv(0, 0) >= 0.0)
    throw SignatureError("slice is not spacelike: g^{tt} >= 0 at sample point");
  fd.lapse = 1.0 / std::sqrt(-ginv(0, 0));
  for (int a = 0; a < 4; ++a) fd.normal[a] = -fd.lapse * ginv(0, a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fd.induced(i, j) = g(i + 1, j + 1);
  const double dh = det(fd.induced);
  if (dh <= 0.0) throw SignatureError("induced metric not positive at sample point");
  fd.volume_density = std::sqrt(dh);
  return fd;
}

Christoffel SpacetimeMetric::christoffel(double t, const Vec3& x) const {
  require_inside(t, x);
  return christoffel_unchecked(t, x);
}

Christoffel SpacetimeMetric::christoffel_unchecked(double t, const Vec3& x) const {
  Christoffel G;
  if (kind_ == MetricKind::Minkowski) return G;
  const Mat4 ginv = inverse_components(t, x);
  const std::array<Mat4, 4> dg = derivatives(t, x);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        double sum = 0.0;
        for (int d = 0; d < 4; ++d)
          sum += ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
        G.g[a][b][c] = 0.5 * sum;
        G.g[a][c][b] = G.g[a][b][c];
      }
  return G;
}

double SpacetimeMetric::family_lapse(double t, const Vec3& x) const {
  if (kind_ == MetricKind::Minkowski) return 1.0;
  const Vec3 rel = x - spec_.bump_center;
  const double rho2 = dot(rel, rel) / (spec_.bump_width * spec_.bump_width);
  return 1.0 + spec_.epsilon * std::cos(t) * unit_bump(rho2);
}

void SpacetimeMetric::require_inside(double t, const Vec3& x) const {
  if (!inside(t, x)) {
    std::ostringstream os;
    os << "point (t=" << t << ", x=[" << x[0] << "," << x[1] << "," << x[2]
       << "]) outside [0,1] x box(R=" << spec_.box_radius << ")";
    throw OutOfDomainError(os.str());
  }
}

SpacetimeMetric SpacetimeMetric::make(const MetricSpec& spec) {
  if (spec.family != "minkowski" && spec.family != "bump")
    throw ConfigError("unknown metric family '" + spec.family + "'");
  if (spec.family == "minkowski" && spec.epsilon != 0.0)
    throw ConfigError("minkowski family requires epsilon = 0");
  if (spec.epsilon < 0.0 || spec.epsilon > spec.epsilon_max)
    throw ConfigError("epsilon outside [0, epsilon_max=" + std::to_string(spec.epsilon_max) +
                      "]");
  if (spec.bump_width <= 0.0 || spec.box_radius <= 0.0)
    throw ConfigError("bump_width and box_radius must be positive");
  if (spec.family == "bump" &&
      norm_inf(spec.bump_center) + spec.bump_width > spec.box_radius)
    throw ConfigError("bump support must fit inside the domain box");

  SpacetimeMetric m(spec);

  const int np = std::max(3, spec.validation_points_per_axis);
  const double R = spec.box_radius;
  for (int it = 0; it < np; ++it) {
    const double t = static_cast<double>(it) / (np - 1);
    for (int ix = 0; ix < np; ++ix)
      for (int iy = 0; iy < np; ++iy)
        for (int iz = 0; iz < np; ++iz) {
          const Vec3 x{-R + 2.0 * R * ix / (np - 1), -R + 2.0 * R * iy / (np - 1),
                       -R + 2.0 * R * iz / (np - 1)};
          const auto ev = symmetric_eigenvalues(m.components(t, x));
          if (!(ev[0] < 0.0 && ev[1] > 0.0 && ev[2] > 0.0 && ev[3] > 0.0))
            throw SignatureError("metric is not Lorentzian at validation sample");
          const double n = m.foliation(t, x).lapse;
          if (n < 0.5 || n > 2.0)
            throw LapseBoundError("lapse " + std::to_string(n) +
                                  " leaves [1/2, 2] at validation sample");
        }
  }
  return m;
}

VolumeReport check_volume_comparison(const SpacetimeMetric& metric, int points_per_axis,
                                     int time_points) {
  VolumeReport rep;
  rep.n_min = 1e300;
  rep.n_max = -1e300;
  const double R = metric.spec().box_radius;
  for (int it = 0; it < time_points; ++it) {
    const double t = time_points == 1 ? 0.0 : static_cast<double>(it) / (time_points - 1);
    for (int ix = 0; ix < points_per_axis; ++ix)
      for (int iy = 0; iy < points_per_axis; ++iy)
        for (int iz = 0; iz < points_per_axis; ++iz) {
          const Vec3 x{-R + 2.0 * R * ix / (points_per_axis - 1),
                       -R + 2.0 * R * iy / (points_per_axis - 1),
                       -R + 2.0 * R * iz / (points_per_axis - 1)};
          const double n = metric.foliation(t, x).lapse;
          rep.n_min = std::min(rep.n_min, n);
          rep.n_max = std::max(rep.n_max, n);
          ++rep.samples;
        }
  }
  rep.within_bounds = rep.n_min >= 0.5 && rep.n_max <= 2.0;
  return rep;
}

}  // namespace wavegeom
