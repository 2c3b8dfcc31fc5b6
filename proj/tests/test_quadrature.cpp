#include <doctest.h>

#include <cmath>
#include <complex>

#include "wavegeom/quadrature.hpp"

using namespace wavegeom;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto& rule = gauss_legendre(8);  // exact through degree 15
  for (int deg : {0, 3, 7, 12, 15}) {
    const double got = integrate(rule, [&](double x) { return std::pow(x, deg); });
    const double expect = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
    CHECK(std::abs(got - expect) < 1e-13);
  }
}

TEST_CASE("transplanted rule integrates on [a,b]") {
  const auto rule = gauss_legendre_on(1.0, 3.0, 12);
  const double got = integrate(rule, [](double x) { return 1.0 / x; });
  CHECK(got == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("composite rule handles oscillatory integrands") {
  const double c = 40.0;
  const auto rule = composite_gauss_legendre(0.0, 1.0, 16, 12);
  const std::complex<double> got = integrate(rule, [&](double x) {
    return std::exp(std::complex<double>(0.0, c * x));
  });
  const std::complex<double> expect =
      (std::exp(std::complex<double>(0.0, c)) - 1.0) / std::complex<double>(0.0, c);
  CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("sphere rule integrates low harmonics exactly") {
  const auto rule = sphere_rule(Vec3{0.3, -0.4, 0.86}, 12, 24);
  double total = 0.0;
  for (const auto& n : rule.nodes) total += n.weight;
  CHECK(total == doctest::Approx(4.0 * 3.14159265358979324).epsilon(1e-13));

  // component averages vanish, second moments equal 4*pi/3 on the diagonal
  for (int i = 0; i < 3; ++i) {
    const double m1 = rule.integrate([&](const Vec3& w) { return w[i]; });
    CHECK(std::abs(m1) < 1e-12);
    for (int j = 0; j < 3; ++j) {
      const double m2 = rule.integrate([&](const Vec3& w) { return w[i] * w[j]; });
      const double expect = (i == j) ? 4.0 * 3.14159265358979324 / 3.0 : 0.0;
      CHECK(std::abs(m2 - expect) < 1e-12);
    }
  }
}

TEST_CASE("sphere rule reproduces the plane-wave integral") {
  // int_{S^2} exp(i k.w) dw = 4 pi sin(k)/k
  const Vec3 k{1.3, -2.0, 0.7};
  const double kn = norm(k);
  const auto rule = sphere_rule(normalized(k), 24, 8);
  const std::complex<double> got = rule.integrate([&](const Vec3& w) {
    return std::exp(std::complex<double>(0.0, dot(k, w)));
  });
  const double expect = 4.0 * 3.14159265358979324 * std::sin(kn) / kn;
  CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("refine_to_tolerance converges and reports failure") {
  const Vec3 k{8.0, 0.0, 0.0};
  auto value = [&](const SphereRule& rule) {
    return rule.integrate(
        [&](const Vec3& w) { return std::exp(std::complex<double>(0.0, dot(k, w))); });
  };
  const auto got = refine_to_tolerance(value, normalized(k), 8, 8, 1e-10, 6);
  const double expect = 4.0 * 3.14159265358979324 * std::sin(8.0) / 8.0;
  CHECK(std::abs(got - std::complex<double>(expect)) < 1e-8);

  CHECK_THROWS_AS(refine_to_tolerance(value, normalized(k), 2, 2, 1e-14, 0),
                  UnderresolvedError);
}
