#ifndef WAVEGEOM_VEC_HPP
#define WAVEGEOM_VEC_HPP

// Small fixed-size linear algebra used throughout the library.
// Spacetime indices are ordered (t, x1, x2, x3).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace wavegeom {

template <class T>
struct Vec3T {
  T v[3]{};

  T& operator[](int i) { return v[i]; }
  const T& operator[](int i) const { return v[i]; }

  Vec3T operator+(const Vec3T& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
  Vec3T operator-(const Vec3T& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
  Vec3T operator*(const T& c) const { return {v[0] * c, v[1] * c, v[2] * c}; }
  Vec3T operator/(const T& c) const { return {v[0] / c, v[1] / c, v[2] / c}; }
  Vec3T operator-() const { return {-v[0], -v[1], -v[2]}; }
  Vec3T& operator+=(const Vec3T& o) {
    v[0] += o.v[0]; v[1] += o.v[1]; v[2] += o.v[2];
    return *this;
  }
};

template <class T>
inline Vec3T<T> operator*(const T& c, const Vec3T<T>& a) { return a * c; }

template <class T>
inline T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2];
}

template <class T>
inline Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.v[1] * b.v[2] - a.v[2] * b.v[1],
          a.v[2] * b.v[0] - a.v[0] * b.v[2],
          a.v[0] * b.v[1] - a.v[1] * b.v[0]};
}

using Vec3 = Vec3T<double>;

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline double norm_inf(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

struct Vec2 {
  double v[2]{};
  double& operator[](int i) { return v[i]; }
  const double& operator[](int i) const { return v[i]; }
  Vec2 operator+(const Vec2& o) const { return {v[0] + o.v[0], v[1] + o.v[1]}; }
  Vec2 operator-(const Vec2& o) const { return {v[0] - o.v[0], v[1] - o.v[1]}; }
  Vec2 operator*(double c) const { return {v[0] * c, v[1] * c}; }
};
inline double dot(const Vec2& a, const Vec2& b) { return a.v[0] * b.v[0] + a.v[1] * b.v[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

struct Vec4 {
  double v[4]{};
  double& operator[](int i) { return v[i]; }
  const double& operator[](int i) const { return v[i]; }
  Vec4 operator+(const Vec4& o) const {
    return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2], v[3] + o.v[3]};
  }
  Vec4 operator-(const Vec4& o) const {
    return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2], v[3] - o.v[3]};
  }
  Vec4 operator*(double c) const { return {v[0] * c, v[1] * c, v[2] * c, v[3] * c}; }
  Vec3 spatial() const { return {v[1], v[2], v[3]}; }
};

template <class T>
struct Mat4T {
  T m[4][4]{};
  T& operator()(int a, int b) { return m[a][b]; }
  const T& operator()(int a, int b) const { return m[a][b]; }
};

using Mat4 = Mat4T<double>;

struct Mat3 {
  double m[3][3]{};
  double& operator()(int a, int b) { return m[a][b]; }
  const double& operator()(int a, int b) const { return m[a][b]; }
};

struct Mat2 {
  double m[2][2]{};
  double& operator()(int a, int b) { return m[a][b]; }
  const double& operator()(int a, int b) const { return m[a][b]; }
};

inline Mat4 minkowski_matrix() {
  Mat4 g;
  g(0, 0) = -1.0;
  g(1, 1) = g(2, 2) = g(3, 3) = 1.0;
  return g;
}

// (g w)_a = g_{ab} w^b
inline Vec4 mat_vec(const Mat4& g, const Vec4& w) {
  Vec4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r[a] += g(a, b) * w[b];
  return r;
}

inline double bilinear(const Mat4& g, const Vec4& a, const Vec4& b) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r += g(i, j) * a[i] * b[j];
  return r;
}

inline Vec3 mat_vec(const Mat3& h, const Vec3& w) {
  Vec3 r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[a] += h(a, b) * w[b];
  return r;
}

inline double bilinear(const Mat3& h, const Vec3& a, const Vec3& b) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r += h(i, j) * a[i] * b[j];
  return r;
}

// Gauss-Jordan inverse with partial pivoting. Returns false on (near) singular input.
template <int N, class Mat>
inline bool invert_impl(const Mat& a, Mat& out) {
  double w[N][2 * N];
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      w[i][j] = a(i, j);
      w[i][N + j] = (i == j) ? 1.0 : 0.0;
    }
  for (int c = 0; c < N; ++c) {
    int p = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(w[r][c]) > std::abs(w[p][c])) p = r;
    if (std::abs(w[p][c]) < 1e-300) return false;
    if (p != c)
      for (int j = 0; j < 2 * N; ++j) std::swap(w[p][j], w[c][j]);
    const double piv = w[c][c];
    for (int j = 0; j < 2 * N; ++j) w[c][j] /= piv;
    for (int r = 0; r < N; ++r) {
      if (r == c) continue;
      const double f = w[r][c];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * N; ++j) w[r][j] -= f * w[c][j];
    }
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = w[i][N + j];
  return true;
}

inline bool invert(const Mat4& a, Mat4& out) { return invert_impl<4>(a, out); }
inline bool invert(const Mat3& a, Mat3& out) { return invert_impl<3>(a, out); }

inline bool invert(const Mat2& a, Mat2& out) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (std::abs(det) < 1e-300) return false;
  out(0, 0) = a(1, 1) / det;
  out(1, 1) = a(0, 0) / det;
  out(0, 1) = -a(0, 1) / det;
  out(1, 0) = -a(1, 0) / det;
  return true;
}

inline double det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

inline double det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations, ascending order.
inline std::array<double, 4> symmetric_eigenvalues(const Mat4& a) {
  double m[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = 0.5 * (a(i, j) + a(j, i));
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-28) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 4; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  std::array<double, 4> ev = {m[0][0], m[1][1], m[2][2], m[3][3]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace wavegeom

#endif
