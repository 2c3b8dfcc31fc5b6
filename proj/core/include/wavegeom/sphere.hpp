#ifndef WAVEGEOM_SPHERE_HPP
#define WAVEGEOM_SPHERE_HPP

// Unit-sphere utilities: smooth orthonormal tangent frames (two charts, so
// every direction including the poles gets a well-conditioned frame),
// geodesic rotations, and icosahedral direction grids.

#include <vector>

#include "wavegeom/vec.hpp"

namespace wavegeom {

struct TangentFrame {
  Vec3 e1, e2;  // orthonormal, e1 x e2 = omega
  int chart;    // 0: z-axis chart, 1: x-axis chart (polar caps)
};

// Frame of the tangent plane at omega. Chart 0 is used when |omega_z| <= 0.9,
// chart 1 otherwise; within a chart the frame varies smoothly with omega.
TangentFrame frame_at(const Vec3& omega);

// Point reached by rotating omega towards the unit tangent e by angle delta
// along the great circle (geodesic rotation).
inline Vec3 rotate_towards(const Vec3& omega, const Vec3& e, double delta) {
  return omega * std::cos(delta) + e * std::sin(delta);
}

// Direction at spherical coordinates (theta, phi) relative to the axis and a
// frame of its tangent plane.
inline Vec3 direction_from_axis(const Vec3& axis, const TangentFrame& f, double theta,
                                double phi) {
  const Vec3 tangent = f.e1 * std::cos(phi) + f.e2 * std::sin(phi);
  return axis * std::cos(theta) + tangent * std::sin(theta);
}

inline double angle_between(const Vec3& a, const Vec3& b) {
  const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
  return std::acos(c);
}

// Icosahedral grids: level 0 = 12 vertices, each refinement subdivides the
// triangulation (12, 42, 162, 642, ... directions).
std::vector<Vec3> icosphere_directions(int level);

}  // namespace wavegeom

#endif
