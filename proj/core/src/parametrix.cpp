#include "wavegeom/parametrix.hpp"

#include <cmath>

#include "wavegeom/parallel.hpp"
#include "wavegeom/quadrature.hpp"

namespace wavegeom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> i_pow(int l) {
  switch (l & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// bessel_kind selector for the reduced integrals
enum BesselKind { kJ0 = 0, kJ1 = 1, kJ2 = 2, kJ0dd = 10, kJ1over = 11 };

double bessel_weight(int kind, double z) {
  switch (kind) {
    case kJ0: return sph_j0(z);
    case kJ1: return sph_j1(z);
    case kJ2: return sph_j2(z);
    case kJ0dd: return sph_j0_dd(z);
    default: return sph_j1_over_x(z);
  }
}

}  // namespace

ParametrixEvaluator::ParametrixEvaluator(const OpticalSolver& solver, DyadicWindow window,
                                         FrequencyProfile profile, ParametrixOptions opt)
    : solver_(&solver), window_(window), profile_(profile), opt_(opt) {}

bool ParametrixEvaluator::has_fast_path(int order) const {
  if (!solver_->metric().flat() || !opt_.flat_fast_path) return false;
  if (order == 0) return true;  // any registered angular mode (l <= 2)
  return profile_.angular == "const";
}

int ParametrixEvaluator::lambda_nodes(double t, double r) const {
  const double range = 1.5 * window_.scale() * (std::abs(t) + std::abs(r));
  return oscillatory_node_count(range, opt_.lambda_min_nodes, opt_.pts_per_wavelength);
}

double ParametrixEvaluator::envelope(int order) const {
  const double s = window_.scale();
  const auto rule = composite_gauss_legendre(0.5 * s, 2.0 * s, 16, 10);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double lam = rule.nodes[i];
    acc += std::abs(window_.eval(lam) * profile_.radial_eval(lam)) *
           std::pow(lam, 2 + order) * rule.weights[i];
  }
  return 4.0 * kPi * acc;
}

// int_0^inf e^{-i lam t} psi(2^-j lam) radial(lam) lam^{2+power} W(lam r) dlam
std::complex<double> ParametrixEvaluator::lambda_integral_flat(double t, double r, int power,
                                                               int bessel_kind) const {
  const double s = window_.scale();
  const int nodes = lambda_nodes(t, r);
  const int per_panel = 10;
  const int panels = (nodes + per_panel - 1) / per_panel;
  const auto rule = composite_gauss_legendre(0.5 * s, 2.0 * s, panels, per_panel);
  std::complex<double> acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double lam = rule.nodes[i];
    const double amp = window_.eval(lam) * profile_.radial_eval(lam) *
                       std::pow(lam, 2 + power) * bessel_weight(bessel_kind, lam * r);
    acc += std::exp(-kI * (lam * t)) * amp * rule.weights[i];
  }
  return acc;
}

std::complex<double> ParametrixEvaluator::value_flat(double t, const Vec3& x) const {
  const int l = profile_.angular_degree();
  const double r = norm(x);
  double ang = 1.0;
  if (l > 0) {
    if (r < 1e-14) return {0.0, 0.0};  // j_l(0) = 0 for l >= 1
    ang = profile_.angular_eval(x / r);
  }
  return 4.0 * kPi * i_pow(l) * ang * lambda_integral_flat(t, r, 0, l);
}

std::array<std::complex<double>, 3> ParametrixEvaluator::gradient_flat(double t,
                                                                       const Vec3& x) const {
  const double r = norm(x);
  std::array<std::complex<double>, 3> g{};
  if (r < 1e-14) return g;
  const std::complex<double> G = -4.0 * kPi * lambda_integral_flat(t, r, 1, kJ1);
  const Vec3 rh = x / r;
  for (int c = 0; c < 3; ++c) g[c] = G * rh[c];
  return g;
}

std::array<std::complex<double>, 6> ParametrixEvaluator::hessian_flat(double t,
                                                                      const Vec3& x) const {
  const double r = norm(x);
  const std::complex<double> a = 4.0 * kPi * lambda_integral_flat(t, r, 2, kJ0dd);
  const std::complex<double> b = -4.0 * kPi * lambda_integral_flat(t, r, 2, kJ1over);
  Vec3 rh{0.0, 0.0, 0.0};
  if (r >= 1e-14) rh = x / r;
  // H = a rh rh^T + b (I - rh rh^T); at r = 0 both bessel weights agree and
  // the limit is isotropic
  std::array<std::complex<double>, 6> h{};
  const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (int c = 0; c < 6; ++c) {
    const int l = idx[c][0], m = idx[c][1];
    const double p = rh[l] * rh[m];
    h[c] = a * p + b * ((l == m ? 1.0 : 0.0) - p);
  }
  return h;
}

double ParametrixEvaluator::flat_radial_abs(double t, double r, int order) const {
  if (order == 0) {
    const int l = profile_.angular_degree();
    if (l != 0) throw ConfigError("flat_radial_abs requires a constant angular profile");
    return std::abs(4.0 * kPi * lambda_integral_flat(t, r, 0, kJ0));
  }
  if (order == 1)
    return std::abs(4.0 * kPi * lambda_integral_flat(t, r, 1, kJ1));
  const std::complex<double> a = 4.0 * kPi * lambda_integral_flat(t, r, 2, kJ0dd);
  const std::complex<double> b = -4.0 * kPi * lambda_integral_flat(t, r, 2, kJ1over);
  return std::sqrt(std::norm(a) + 2.0 * std::norm(b));
}

namespace {

struct SphereNodeData {
  double u;
  double ang;       // angular profile value
  Vec3 grad_u;      // b^{-1} N
  Mat3 hess_u;      // finite differences of grad u (generic hessian only)
};

}  // namespace

// Generic product quadrature. The sphere rule is sized from a coarse scan of
// the phase range and refined (doubled) until the value settles.
std::complex<double> ParametrixEvaluator::value_generic(double t, const Vec3& x) const {
  const double r = norm(x);
  const Vec3 axis = r > 1e-9 ? x / r : Vec3{0.0, 0.0, 1.0};

  // phase range estimate over the sphere
  double umin = 1e300, umax = -1e300;
  for (const auto& w : icosphere_directions(1)) {
    const double u = solver_->u(t, x, w);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double range = window_.scale() * 2.0 * (umax - umin);
  const int nt0 = std::max(opt_.min_theta, oscillatory_node_count(range, 8, 1.2));
  const int np0 = std::max(opt_.min_phi,
                           solver_->metric().flat() ? opt_.min_phi : (2 * nt0) / 3);

  auto eval_on = [&](const SphereRule& rule) {
    std::vector<std::complex<double>> parts(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      const Vec3& w = rule.nodes[i].dir;
      const double u = solver_->u(t, x, w);
      const double ang = profile_.angular_eval(w);
      // inner lambda integral with phase e^{+i lam u}
      const std::complex<double> inner = lambda_integral_flat(-u, 0.0, 0, kJ0);
      parts[i] = inner * (ang * rule.nodes[i].weight);
    });
    std::complex<double> acc{};
    for (const auto& p : parts) acc += p;
    return acc;
  };
  return refine_to_tolerance(eval_on, axis, nt0, np0, opt_.rel_tol, opt_.max_doublings,
                             envelope(0));
}

std::array<std::complex<double>, 3> ParametrixEvaluator::gradient_generic(
    double t, const Vec3& x) const {
  const double r = norm(x);
  const Vec3 axis = r > 1e-9 ? x / r : Vec3{0.0, 0.0, 1.0};
  double umin = 1e300, umax = -1e300;
  for (const auto& w : icosphere_directions(1)) {
    const double u = solver_->u(t, x, w);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double range = window_.scale() * 2.0 * (umax - umin);
  const int nt0 = std::max(opt_.min_theta, oscillatory_node_count(range, 8, 1.2));
  const int np0 = std::max(opt_.min_phi,
                           solver_->metric().flat() ? opt_.min_phi : (2 * nt0) / 3);

  std::array<std::complex<double>, 3> out{};
  for (int c = 0; c < 3; ++c) {
    auto eval_on = [&, c](const SphereRule& rule) {
      std::vector<std::complex<double>> parts(rule.nodes.size());
      parallel_for(rule.nodes.size(), [&](std::size_t i) {
        const Vec3& w = rule.nodes[i].dir;
        const auto pd = solver_->evaluate(t, x, w);
        const Vec3 grad_u = pd.N * (1.0 / pd.b);
        const double ang = profile_.angular_eval(w);
        const std::complex<double> inner =
            kI * lambda_integral_flat(-pd.u, 0.0, 1, kJ0);
        parts[i] = inner * (grad_u[c] * ang * rule.nodes[i].weight);
      });
      std::complex<double> acc{};
      for (const auto& p : parts) acc += p;
      return acc;
    };
    out[c] = refine_to_tolerance(eval_on, axis, nt0, np0, opt_.rel_tol,
                                 opt_.max_doublings, envelope(1));
  }
  return out;
}

std::array<std::complex<double>, 6> ParametrixEvaluator::hessian_generic(
    double t, const Vec3& x) const {
  const double r = norm(x);
  const Vec3 axis = r > 1e-9 ? x / r : Vec3{0.0, 0.0, 1.0};
  double umin = 1e300, umax = -1e300;
  for (const auto& w : icosphere_directions(1)) {
    const double u = solver_->u(t, x, w);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double range = window_.scale() * 2.0 * (umax - umin);
  const int nt0 = std::max(opt_.min_theta, oscillatory_node_count(range, 8, 1.2));
  const int np0 = std::max(opt_.min_phi,
                           solver_->metric().flat() ? opt_.min_phi : (2 * nt0) / 3);
  const bool flat = solver_->metric().flat();
  const double h = opt_.hessian_fd_step;

  const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  std::array<std::complex<double>, 6> out{};
  for (int c = 0; c < 6; ++c) {
    const int a = idx[c][0], b = idx[c][1];
    auto eval_on = [&, a, b](const SphereRule& rule) {
      std::vector<std::complex<double>> parts(rule.nodes.size());
      parallel_for(rule.nodes.size(), [&](std::size_t i) {
        const Vec3& w = rule.nodes[i].dir;
        const auto pd = solver_->evaluate(t, x, w);
        const Vec3 grad_u = pd.N * (1.0 / pd.b);
        const double ang = profile_.angular_eval(w);
        std::complex<double> val =
            -lambda_integral_flat(-pd.u, 0.0, 2, kJ0) * (grad_u[a] * grad_u[b]);
        if (!flat) {
          // second derivative of u by differencing grad u = b^{-1} N
          Vec3 xp = x, xm = x;
          xp[b] += h;
          xm[b] -= h;
          const auto pp = solver_->evaluate(t, xp, w);
          const auto pm = solver_->evaluate(t, xm, w);
          const double dd =
              (pp.N[a] / pp.b - pm.N[a] / pm.b) / (2.0 * h);
          val += kI * lambda_integral_flat(-pd.u, 0.0, 1, kJ0) * dd;
        }
        parts[i] = val * (ang * rule.nodes[i].weight);
      });
      std::complex<double> acc{};
      for (const auto& p : parts) acc += p;
      return acc;
    };
    out[c] = refine_to_tolerance(eval_on, axis, nt0, np0, opt_.rel_tol,
                                 opt_.max_doublings, envelope(2));
  }
  return out;
}

std::complex<double> ParametrixEvaluator::value(double t, const Vec3& x) const {
  return has_fast_path(0) ? value_flat(t, x) : value_generic(t, x);
}

std::array<std::complex<double>, 3> ParametrixEvaluator::gradient(double t,
                                                                  const Vec3& x) const {
  return has_fast_path(1) ? gradient_flat(t, x) : gradient_generic(t, x);
}

std::array<std::complex<double>, 6> ParametrixEvaluator::hessian(double t,
                                                                 const Vec3& x) const {
  return has_fast_path(2) ? hessian_flat(t, x) : hessian_generic(t, x);
}

FieldSample sample_parametrix(const ParametrixEvaluator& ev, const GridSpec& grid, int order,
                              int threads) {
  FieldSample f;
  f.grid = grid;
  f.j = ev.level();
  f.derivative_order = order;
  f.ncomp = order == 0 ? 1 : (order == 1 ? 3 : 6);
  f.values.resize(grid.npoints() * f.ncomp);
  parallel_for(
      static_cast<std::size_t>(grid.nt) * grid.nx,
      [&](std::size_t slab) {
        const int it = static_cast<int>(slab) / grid.nx;
        const int ix = static_cast<int>(slab) % grid.nx;
        const double t = grid.time(it);
        for (int iy = 0; iy < grid.ny; ++iy)
          for (int iz = 0; iz < grid.nz; ++iz) {
            const Vec3 x = grid.point(ix, iy, iz);
            const std::size_t p = grid.index(it, ix, iy, iz);
            if (order == 0) {
              f.values[p] = ev.value(t, x);
            } else if (order == 1) {
              const auto g = ev.gradient(t, x);
              for (int c = 0; c < 3; ++c) f.values[p * 3 + c] = g[c];
            } else {
              const auto h = ev.hessian(t, x);
              for (int c = 0; c < 6; ++c) f.values[p * 6 + c] = h[c];
            }
          }
      },
      threads);
  return f;
}

}  // namespace wavegeom
