#include "wavegeom/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wavegeom/errors.hpp"

namespace wavegeom {

namespace {

// Nodes/weights by Newton iteration on the Legendre polynomial; standard
// Golub-Welsch-free construction, accurate to machine precision.
QuadRule1D compute_gauss_legendre(int n) {
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::map<int, QuadRule1D> g_gl_cache;
std::mutex g_gl_mutex;

}  // namespace

const QuadRule1D& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(g_gl_mutex);
  auto it = g_gl_cache.find(n);
  if (it == g_gl_cache.end()) it = g_gl_cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule1D gauss_legendre_on(double a, double b, int n) {
  const QuadRule1D& base = gauss_legendre(n);
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * base.nodes[i];
    rule.weights[i] = half * base.weights[i];
  }
  return rule;
}

QuadRule1D composite_gauss_legendre(double a, double b, int panels, int per_panel) {
  QuadRule1D rule;
  rule.nodes.reserve(panels * per_panel);
  rule.weights.reserve(panels * per_panel);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    QuadRule1D part = gauss_legendre_on(a + p * h, a + (p + 1) * h, per_panel);
    rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
    rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
  }
  return rule;
}

SphereRule sphere_rule(const Vec3& axis, int n_theta, int n_phi) {
  const Vec3 ax = normalized(axis);
  const TangentFrame f = frame_at(ax);
  const QuadRule1D& mu = gauss_legendre(n_theta);
  SphereRule rule;
  rule.n_theta = n_theta;
  rule.n_phi = n_phi;
  rule.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  const double two_pi = 6.283185307179586476925286766559;
  const double wphi = two_pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double c = mu.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = wphi * j;
      const Vec3 tangent = f.e1 * std::cos(phi) + f.e2 * std::sin(phi);
      rule.nodes.push_back({ax * c + tangent * s, mu.weights[i] * wphi});
    }
  }
  return rule;
}

std::complex<double> refine_to_tolerance(
    const std::function<std::complex<double>(const SphereRule&)>& value, const Vec3& axis,
    int n_theta0, int n_phi0, double rel_tol, int max_doublings, double scale,
    double* achieved_rel_change) {
  int nt = n_theta0, np = n_phi0;
  std::complex<double> prev = value(sphere_rule(axis, nt, np));
  for (int k = 0; k < max_doublings; ++k) {
    nt *= 2;
    np *= 2;
    const std::complex<double> cur = value(sphere_rule(axis, nt, np));
    const double ref = scale > 0.0 ? scale : std::max(std::abs(cur), 1e-300);
    const double change = std::abs(cur - prev) / ref;
    if (achieved_rel_change) *achieved_rel_change = change;
    if (change <= rel_tol) return cur;
    prev = cur;
  }
  throw UnderresolvedError("sphere quadrature did not converge to tolerance " +
                           std::to_string(rel_tol) + " within refinement budget");
}

}  // namespace wavegeom
