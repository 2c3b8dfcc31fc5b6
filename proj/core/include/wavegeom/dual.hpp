#ifndef WAVEGEOM_DUAL_HPP
#define WAVEGEOM_DUAL_HPP

// Forward-mode dual number carrying partials with respect to the four
// spacetime coordinates. Evaluating a metric family on Dual4 inputs yields
// machine-exact first derivatives of the components ("analytic" scheme).

#include <array>
#include <cmath>

namespace wavegeom {

struct Dual4 {
  double v = 0.0;
  std::array<double, 4> d{};

  Dual4() = default;
  Dual4(double value) : v(value) {}
  static Dual4 variable(double value, int slot) {
    Dual4 r(value);
    r.d[slot] = 1.0;
    return r;
  }

  Dual4 operator-() const {
    Dual4 r(-v);
    for (int i = 0; i < 4; ++i) r.d[i] = -d[i];
    return r;
  }
  Dual4 operator+(const Dual4& o) const {
    Dual4 r(v + o.v);
    for (int i = 0; i < 4; ++i) r.d[i] = d[i] + o.d[i];
    return r;
  }
  Dual4 operator-(const Dual4& o) const {
    Dual4 r(v - o.v);
    for (int i = 0; i < 4; ++i) r.d[i] = d[i] - o.d[i];
    return r;
  }
  Dual4 operator*(const Dual4& o) const {
    Dual4 r(v * o.v);
    for (int i = 0; i < 4; ++i) r.d[i] = d[i] * o.v + v * o.d[i];
    return r;
  }
  Dual4 operator/(const Dual4& o) const {
    Dual4 r(v / o.v);
    const double inv2 = 1.0 / (o.v * o.v);
    for (int i = 0; i < 4; ++i) r.d[i] = (d[i] * o.v - v * o.d[i]) * inv2;
    return r;
  }
  Dual4& operator+=(const Dual4& o) { return *this = *this + o; }
  Dual4& operator*=(const Dual4& o) { return *this = *this * o; }
};

inline Dual4 operator+(double c, const Dual4& a) { return Dual4(c) + a; }
inline Dual4 operator-(double c, const Dual4& a) { return Dual4(c) - a; }
inline Dual4 operator*(double c, const Dual4& a) { return Dual4(c) * a; }
inline Dual4 operator/(double c, const Dual4& a) { return Dual4(c) / a; }

inline Dual4 exp(const Dual4& a) {
  Dual4 r(std::exp(a.v));
  for (int i = 0; i < 4; ++i) r.d[i] = r.v * a.d[i];
  return r;
}
inline Dual4 sin(const Dual4& a) {
  Dual4 r(std::sin(a.v));
  const double c = std::cos(a.v);
  for (int i = 0; i < 4; ++i) r.d[i] = c * a.d[i];
  return r;
}
inline Dual4 cos(const Dual4& a) {
  Dual4 r(std::cos(a.v));
  const double s = -std::sin(a.v);
  for (int i = 0; i < 4; ++i) r.d[i] = s * a.d[i];
  return r;
}
inline Dual4 sqrt(const Dual4& a) {
  Dual4 r(std::sqrt(a.v));
  const double f = 0.5 / r.v;
  for (int i = 0; i < 4; ++i) r.d[i] = f * a.d[i];
  return r;
}

// value()/derivative access helpers shared by double and Dual4 code paths
inline double value_of(double x) { return x; }
inline double value_of(const Dual4& x) { return x.v; }

}  // namespace wavegeom

#endif
