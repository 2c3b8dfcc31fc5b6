#include "wavegeom/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wavegeom {

TangentFrame frame_at(const Vec3& omega) {
  TangentFrame f;
  const Vec3 z{0.0, 0.0, 1.0};
  const Vec3 x{1.0, 0.0, 0.0};
  if (std::abs(omega[2]) <= 0.9) {
    f.chart = 0;
    f.e1 = normalized(cross(z, omega));
  } else {
    f.chart = 1;
    f.e1 = normalized(cross(x, omega));
  }
  f.e2 = cross(omega, f.e1);
  return f;
}

namespace {

struct IcoMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh base_icosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
      {0, -1, -p}, {0, 1, -p}, {p, 0, -1},  {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
  for (auto& w : v) w = normalized(w);
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
      {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
      {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
      {8, 6, 7},  {9, 8, 1}};
  return {v, f};
}

IcoMesh subdivide(const IcoMesh& in) {
  IcoMesh out;
  out.verts = in.verts;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec3 m = normalized(out.verts[a] + out.verts[b]);
    out.verts.push_back(m);
    const int idx = static_cast<int>(out.verts.size()) - 1;
    midpoint[key] = idx;
    return idx;
  };
  for (const auto& f : in.faces) {
    const int a = mid(f[0], f[1]);
    const int b = mid(f[1], f[2]);
    const int c = mid(f[2], f[0]);
    out.faces.push_back({f[0], a, c});
    out.faces.push_back({f[1], b, a});
    out.faces.push_back({f[2], c, b});
    out.faces.push_back({a, b, c});
  }
  return out;
}

}  // namespace

std::vector<Vec3> icosphere_directions(int level) {
  IcoMesh mesh = base_icosahedron();
  for (int l = 0; l < level; ++l) mesh = subdivide(mesh);
  return mesh.verts;
}

}  // namespace wavegeom
