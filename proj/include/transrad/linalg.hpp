// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace transrad {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

struct CVec3 {
  cplx x{}, y{}, z{};

  cplx& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  cplx operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }
inline CVec3 to_complex(const Vec3& v) { return {cplx(v.x), cplx(v.y), cplx(v.z)}; }
inline CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }
// Plain bilinear dot (no conjugation); conjugate explicitly where needed.
inline cplx dot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline cplx dot(const Vec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const CVec3& v) { return std::norm(v.x) + std::norm(v.y) + std::norm(v.z); }

// Symmetric 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat3 diag(double a0, double a1, double a2) {
    Mat3 m;
    m(0, 0) = a0;
    m(1, 1) = a1;
    m(2, 2) = a2;
    return m;
  }
};

inline Vec3 mul(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
          m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

inline double quad_form(const Mat3& m, const Vec3& v) { return dot(v, mul(m, v)); }

inline double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat3 inverse(const Mat3& m) {
  const double d = det(m);
  if (d == 0.0) throw std::invalid_argument("Mat3: singular matrix");
  Mat3 r;
  r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
  r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
  r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
  r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
  r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
  r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
  r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
  r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
  r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
  return r;
}

// Cholesky factor L (lower triangular), m = L L^T. Requires SPD input.
inline Mat3 cholesky(const Mat3& m) {
  Mat3 l;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) throw std::invalid_argument("Mat3: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// Solve L^T x = u for lower-triangular L (back substitution).
inline Vec3 solve_lt_transposed(const Mat3& l, const Vec3& u) {
  Vec3 x;
  x.z = u.z / l(2, 2);
  x.y = (u.y - l(2, 1) * x.z) / l(1, 1);
  x.x = (u.x - l(1, 0) * x.y - l(2, 0) * x.z) / l(0, 0);
  return x;
}

// Complex 3x3 matrix for the dP curly-bracket tensor.
struct Mat3c {
  std::array<cplx, 9> a{};

  cplx& operator()(int i, int j) { return a[3 * i + j]; }
  cplx operator()(int i, int j) const { return a[3 * i + j]; }

  Mat3c operator+(const Mat3c& o) const {
    Mat3c r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat3c operator*(cplx s) const {
    Mat3c r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
    return r;
  }
};

// Contravariant Minkowski 4-vector, metric (+,-,-,-).
struct FourVec {
  double t = 0.0;
  Vec3 v{};

  double operator[](int mu) const { return mu == 0 ? t : v[mu - 1]; }
  // Covariant component a_mu.
  double lower(int mu) const { return mu == 0 ? t : -v[mu - 1]; }

  FourVec operator+(const FourVec& o) const { return {t + o.t, v + o.v}; }
  FourVec operator-(const FourVec& o) const { return {t - o.t, v - o.v}; }
};

inline double mdot(const FourVec& a, const FourVec& b) { return a.t * b.t - dot(a.v, b.v); }

// Totally antisymmetric symbol, eps(0,1,2,3) = +1.
inline int levi_civita4(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

}  // namespace transrad
