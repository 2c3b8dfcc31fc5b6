#include <doctest.h>

#include <cmath>
#include <complex>

#include "wavegeom/profile.hpp"
#include "wavegeom/quadrature.hpp"
#include "wavegeom/window.hpp"

using namespace wavegeom;

namespace {

// independent Simpson integration used as the oracle in this file
template <class F>
double simpson(double a, double b, int n, F&& f) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("psi is a bump with support exactly [1/2, 2] and peak 1 at 5/4") {
  CHECK(DyadicWindow::psi(0.5) == 0.0);
  CHECK(DyadicWindow::psi(2.0) == 0.0);
  CHECK(DyadicWindow::psi(0.49) == 0.0);
  CHECK(DyadicWindow::psi(2.01) == 0.0);
  CHECK(DyadicWindow::psi(1.25) == doctest::Approx(1.0).epsilon(1e-15));
  for (double lam : {0.6, 0.9, 1.0, 1.5, 1.9})
    CHECK(DyadicWindow::psi(lam) > 0.0);
  // smooth vanishing at the edges
  CHECK(DyadicWindow::psi(0.501) < 1e-100);
  CHECK(DyadicWindow::psi(1.999) < 1e-100);
}

TEST_CASE("psi derivatives match finite differences") {
  const double h = 1e-6;
  for (double lam : {0.7, 1.0, 1.25, 1.6, 1.85}) {
    const double fd1 = (DyadicWindow::psi(lam + h) - DyadicWindow::psi(lam - h)) / (2 * h);
    CHECK(DyadicWindow::psi_d1(lam) == doctest::Approx(fd1).epsilon(1e-6));
    const double fd2 = (DyadicWindow::psi(lam + h) - 2 * DyadicWindow::psi(lam) +
                        DyadicWindow::psi(lam - h)) /
                       (h * h);
    CHECK(DyadicWindow::psi_d2(lam) == doctest::Approx(fd2).epsilon(1e-3));
  }
}

TEST_CASE("window level scaling") {
  DyadicWindow w{3};
  CHECK(w.scale() == 8.0);
  CHECK(w.eval(10.0) == doctest::Approx(DyadicWindow::psi(1.25)).epsilon(1e-15));
  CHECK(w.eval(3.9) == 0.0);
  CHECK(w.eval(16.1) == 0.0);
}

TEST_CASE("window integrals against a Simpson oracle (frozen reference values)") {
  const double i0 = simpson(0.5, 2.0, 4000, [](double lam) {
    const double p = DyadicWindow::psi(lam);
    return p * p * lam * lam;
  });
  CHECK(window_I0() == doctest::Approx(i0).epsilon(1e-9));
  // reference values for this fixed bump
  CHECK(window_I0() == doctest::Approx(0.725639693170).epsilon(1e-9));
  CHECK(window_I2() == doctest::Approx(23.058763873).epsilon(1e-6));
  CHECK(window_c_psi() == doctest::Approx(23.058763873).epsilon(1e-6));
}

TEST_CASE("one-dimensional kernel factor is dominated by C_psi / (1 + D^2)") {
  // |int e^{i lam D} psi^2 lam^2 dlam| (1 + D^2) <= C_psi, scanned over D
  double sup = 0.0;
  for (double D = 0.0; D <= 120.0; D += 0.05) {
    const int n = 400 + static_cast<int>(40 * D);
    std::complex<double> re{}, im{};
    const std::complex<double> k = [&] {
      std::complex<double> acc{};
      const double a = 0.5, b = 2.0;
      const int nn = n % 2 ? n + 1 : n;
      const double h = (b - a) / nn;
      auto f = [&](double lam) {
        const double p = DyadicWindow::psi(lam);
        return std::exp(std::complex<double>(0.0, lam * D)) * (p * p * lam * lam);
      };
      acc = f(a) + f(b);
      for (int i = 1; i < nn; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
      return acc * (h / 3.0);
    }();
    (void)re;
    (void)im;
    sup = std::max(sup, std::abs(k) * (1.0 + D * D));
  }
  CHECK(sup < window_c_psi());
  CHECK(sup > 0.5 * window_c_psi());  // the margin is real but not vacuous
}

TEST_CASE("profile registry: evaluation and rejection") {
  const auto p = FrequencyProfile::parse("one", "const");
  CHECK(p.radial_eval(7.3) == 1.0);
  CHECK(p.angular_eval(Vec3{0, 0, 1}) == 1.0);
  CHECK(p.angular_degree() == 0);
  const auto y10 = FrequencyProfile::parse("one", "y10");
  CHECK(y10.angular_degree() == 1);
  CHECK(y10.angular_eval(Vec3{0, 0, 1}) ==
        doctest::Approx(std::sqrt(3.0 / (4.0 * kPi))).epsilon(1e-14));
  CHECK_THROWS_AS(FrequencyProfile::parse("cubic", "const"), ConfigError);
  CHECK_THROWS_AS(FrequencyProfile::parse("one", "y30"), ConfigError);
}

TEST_CASE("angular moments: orthonormal harmonics have unit L2") {
  for (const char* ang : {"y10", "y11", "y1m1", "y20", "y22"}) {
    const auto p = FrequencyProfile::parse("one", ang);
    // direct product-rule integration of angular^2
    const auto rule = sphere_rule(Vec3{0.3, 0.5, 0.81}, 8, 16);
    const double l2 = rule.integrate([&](const Vec3& w) {
      const double a = p.angular_eval(w);
      return a * a;
    });
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.angular_l2() == doctest::Approx(l2).epsilon(1e-12));
    CHECK(p.angular_l4() > 0.0);
  }
  const auto c = FrequencyProfile::parse("one", "const");
  CHECK(c.angular_l2() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  CHECK(c.angular_l4() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("windowed data norm: value and dyadic scaling") {
  const auto p = FrequencyProfile::parse("one", "const");
  const DyadicWindow w0{0};
  const double expect0 = std::sqrt(4.0 * kPi * simpson(0.5, 2.0, 4000, [](double lam) {
                                     const double ps = DyadicWindow::psi(lam);
                                     return ps * ps * lam * lam;
                                   }));
  CHECK(p.data_norm(w0) == doctest::Approx(expect0).epsilon(1e-9));
  // radial = 1: ||psi(2^-j .)||_{L^2}^2 scales as 2^{3j}
  for (int j : {1, 3, 5}) {
    const DyadicWindow wj{j};
    CHECK(p.data_norm(wj) ==
          doctest::Approx(std::pow(2.0, 1.5 * j) * p.data_norm(w0)).epsilon(1e-10));
  }
  // normalization makes the norm exactly one
  const DyadicWindow w4{4};
  CHECK(p.normalized(w4).data_norm(w4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spherical bessel functions: values and series joins") {
  CHECK(sph_j0(0.0) == 1.0);
  CHECK(sph_j1(0.0) == 0.0);
  CHECK(sph_j2(0.0) == 0.0);
  CHECK(std::abs(sph_j0(kPi)) < 1e-15);
  // continuity across the series/analytic switch
  for (double x : {0.999e-3, 1.001e-3}) {
    CHECK(sph_j0(x) == doctest::Approx(1.0 - x * x / 6.0).epsilon(1e-10));
    CHECK(sph_j1(x) == doctest::Approx(x / 3.0).epsilon(1e-7));
  }
  CHECK(sph_j1(2.0) == doctest::Approx(std::sin(2.0) / 4.0 - std::cos(2.0) / 2.0)
                           .epsilon(1e-14));
  CHECK(sph_j0_dd(1.5) ==
        doctest::Approx(-sph_j0(1.5) + 2.0 * sph_j1(1.5) / 1.5).epsilon(1e-14));
  CHECK(sph_j1_over_x(1e-6) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}
