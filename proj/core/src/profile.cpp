#include "wavegeom/profile.hpp"

#include <cmath>

#include "wavegeom/errors.hpp"
#include "wavegeom/quadrature.hpp"

namespace wavegeom {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

FrequencyProfile FrequencyProfile::parse(const std::string& radial,
                                         const std::string& angular, double amplitude) {
  FrequencyProfile p;
  p.radial = radial;
  p.angular = angular;
  p.amplitude = amplitude;
  if (radial != "one" && radial != "invsqrt" && radial != "inv")
    throw ConfigError("unknown radial profile '" + radial + "'");
  if (angular != "const" && angular != "y10" && angular != "y11" && angular != "y1m1" &&
      angular != "y20" && angular != "y22")
    throw ConfigError("unknown angular profile '" + angular + "'");
  return p;
}

double FrequencyProfile::radial_eval(double lam) const {
  if (radial == "one") return amplitude;
  if (radial == "invsqrt") return amplitude / std::sqrt(lam);
  return amplitude / lam;
}

double FrequencyProfile::angular_eval(const Vec3& w) const {
  if (angular == "const") return 1.0;
  if (angular == "y10") return std::sqrt(3.0 / (4.0 * kPi)) * w[2];
  if (angular == "y11") return std::sqrt(3.0 / (4.0 * kPi)) * w[0];
  if (angular == "y1m1") return std::sqrt(3.0 / (4.0 * kPi)) * w[1];
  if (angular == "y20") return std::sqrt(5.0 / (16.0 * kPi)) * (3.0 * w[2] * w[2] - 1.0);
  // y22
  return 0.25 * std::sqrt(15.0 / kPi) * (w[0] * w[0] - w[1] * w[1]);
}

int FrequencyProfile::angular_degree() const {
  if (angular == "const") return 0;
  if (angular == "y10" || angular == "y11" || angular == "y1m1") return 1;
  return 2;
}

double FrequencyProfile::angular_l2() const {
  return angular == "const" ? 4.0 * kPi : 1.0;  // orthonormal harmonics
}

double FrequencyProfile::angular_l4() const {
  // int angular^4 over the sphere, by the exact product rule (degree <= 8)
  const auto rule = sphere_rule(Vec3{0, 0, 1}, 10, 20);
  return rule.integrate([&](const Vec3& w) {
    const double a = angular_eval(w);
    return a * a * a * a;
  });
}

double FrequencyProfile::data_norm(const DyadicWindow& window) const {
  const double s = window.scale();
  const auto rule = composite_gauss_legendre(0.5 * s, 2.0 * s, 24, 10);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double lam = rule.nodes[i];
    const double w = window.eval(lam) * radial_eval(lam);
    acc += w * w * lam * lam * rule.weights[i];
  }
  return std::sqrt(acc * angular_l2());
}

FrequencyProfile FrequencyProfile::normalized(const DyadicWindow& window) const {
  FrequencyProfile p = *this;
  p.amplitude = amplitude / data_norm(window);
  return p;
}

double sph_j0(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sph_j1(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return x / 3.0 - x * x2 / 30.0;
  }
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

double sph_j2(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-2) {
    const double x2 = x * x;
    return x2 / 15.0 - x2 * x2 / 210.0;
  }
  return (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x);
}

double sph_jl(int l, double x) {
  switch (l) {
    case 0: return sph_j0(x);
    case 1: return sph_j1(x);
    case 2: return sph_j2(x);
    default: throw ConfigError("spherical bessel order > 2 not supported");
  }
}

double sph_j0_dd(double x) {
  // j0'' = -j0 + 2 j1 / x
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 / 10.0;
  }
  return -sph_j0(x) + 2.0 * sph_j1(x) / x;
}

double sph_j1_over_x(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0;
  }
  return sph_j1(x) / x;
}

}  // namespace wavegeom
