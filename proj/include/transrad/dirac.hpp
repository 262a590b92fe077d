// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "transrad/linalg.hpp"

namespace transrad {

// The gamma-matrix arithmetic runs in extended precision: the traced
// combinations cancel down to the q^2 scale, which is chi^2 below the
// leading entries at small recoil.
using lcplx = std::complex<long double>;

struct Mat4c {
  std::array<lcplx, 16> a{};

  lcplx& operator()(int i, int j) { return a[4 * i + j]; }
  const lcplx& operator()(int i, int j) const { return a[4 * i + j]; }

  static Mat4c identity() {
    Mat4c m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0L;
    return m;
  }

  Mat4c operator+(const Mat4c& o) const {
    Mat4c r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat4c operator-(const Mat4c& o) const {
    Mat4c r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  Mat4c operator*(const Mat4c& o) const {
    Mat4c r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const lcplx aik = (*this)(i, k);
        if (aik == lcplx{}) continue;
        for (int j = 0; j < 4; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  Mat4c operator*(lcplx s) const {
    Mat4c r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] * s;
    return r;
  }

  lcplx trace() const { return a[0] + a[5] + a[10] + a[15]; }

  Mat4c dagger() const {
    Mat4c r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  long double max_abs() const {
    long double m = 0.0L;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Mat4c operator*(lcplx s, const Mat4c& m) { return m * s; }

inline Mat4c commutator(const Mat4c& a, const Mat4c& b) { return a * b - b * a; }
inline Mat4c anticommutator(const Mat4c& a, const Mat4c& b) { return a * b + b * a; }

// Gamma matrices in a given representation; defaults to the standard Dirac
// representation. Conventions: metric (+,-,-,-), sigma^{mu nu} = (i/2)
// [gamma^mu, gamma^nu], gamma5 = -i gamma^0 gamma^1 gamma^2 gamma^3.
struct GammaBasis {
  std::array<Mat4c, 4> gamma{};
  Mat4c gamma5;
  Mat4c unit;
  std::array<std::array<Mat4c, 4>, 4> sigma{};  // sigma^{mu nu}

  static const GammaBasis& standard() {
    static const GammaBasis b = make_dirac();
    return b;
  }

  static GammaBasis make_dirac() {
    GammaBasis b;
    b.unit = Mat4c::identity();
    const lcplx I(0.0L, 1.0L);
    // gamma^0 = diag(1, 1, -1, -1)
    b.gamma[0](0, 0) = 1.0L;
    b.gamma[0](1, 1) = 1.0L;
    b.gamma[0](2, 2) = -1.0L;
    b.gamma[0](3, 3) = -1.0L;
    // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
    const lcplx s1[2][2] = {{0.0L, 1.0L}, {1.0L, 0.0L}};
    const lcplx s2[2][2] = {{0.0L, -I}, {I, 0.0L}};
    const lcplx s3[2][2] = {{1.0L, 0.0L}, {0.0L, -1.0L}};
    auto fill = [](Mat4c& g, const lcplx p[2][2]) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          g(i, j + 2) = p[i][j];
          g(i + 2, j) = -p[i][j];
        }
    };
    fill(b.gamma[1], s1);
    fill(b.gamma[2], s2);
    fill(b.gamma[3], s3);
    b.finish();
    return b;
  }

  // gamma'^mu = U gamma^mu U^dagger for unitary U; the squared matrix
  // element is representation independent.
  GammaBasis transformed(const Mat4c& u) const {
    GammaBasis b;
    b.unit = Mat4c::identity();
    const Mat4c ud = u.dagger();
    for (int mu = 0; mu < 4; ++mu) b.gamma[mu] = u * gamma[mu] * ud;
    b.finish();
    return b;
  }

  // slash(a) = gamma^mu a_mu = gamma^0 a^0 - gamma.a
  Mat4c slash(const FourVec& v) const {
    Mat4c r = gamma[0] * lcplx(static_cast<long double>(v.t));
    for (int k = 1; k < 4; ++k) r = r - gamma[k] * lcplx(static_cast<long double>(v.v[k - 1]));
    return r;
  }

  // a_mu sigma^{mu i} with covariant components of a; i is a spacetime index.
  Mat4c sigma_contract(const FourVec& a, int i) const {
    Mat4c r = sigma[0][i] * lcplx(static_cast<long double>(a.t));
    for (int k = 1; k < 4; ++k) r = r - sigma[k][i] * lcplx(static_cast<long double>(a.v[k - 1]));
    return r;
  }

 private:
  void finish() {
    const lcplx mi(0.0L, -1.0L);
    gamma5 = mi * (gamma[0] * gamma[1] * gamma[2] * gamma[3]);
    const lcplx ihalf(0.0L, 0.5L);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) sigma[mu][nu] = ihalf * commutator(gamma[mu], gamma[nu]);
  }
};

// Rest-frame spin vector zeta and the associated 4-vector
// s = (zeta.p/m, zeta + p (zeta.p) / (m (p0 + m))), with s.p = 0 and
// s^2 = -zeta^2. |zeta| = 1 for pure states, < 1 for mixed ones.
struct SpinState {
  Vec3 zeta{};

  bool pure(double tol = 1e-12) const { return std::abs(norm(zeta) - 1.0) <= tol; }

  FourVec s_mu(const Vec3& p, double mass) const {
    const double p0 = std::sqrt(mass * mass + norm2(p));
    const double zp = dot(zeta, p);
    return {zp / mass, zeta + p * (zp / (mass * (p0 + mass)))};
  }
};

// Eigenvectors of sigma.tau: chi_+ = (cos(t/2), e^{i phi} sin(t/2)),
// chi_- = (-e^{-i phi} sin(t/2), cos(t/2)).
inline std::array<cplx, 2> pauli_eigenvector(const Vec3& tau, int s) {
  const double t = std::acos(std::clamp(tau.z / norm(tau), -1.0, 1.0));
  const double phi = (tau.x == 0.0 && tau.y == 0.0) ? 0.0 : std::atan2(tau.y, tau.x);
  const double c = std::cos(t / 2.0), sn = std::sin(t / 2.0);
  if (s > 0) return {cplx(c), std::polar(sn, phi)};
  return {-std::polar(sn, -phi), cplx(c)};
}

// Mode function u_s(p) = (m + pslash) / sqrt(2 m (p0 + m)) [chi_s; 0],
// normalized so that ubar_s u_s = 1.
struct Bispinor {
  std::array<lcplx, 4> c{};
  Vec3 p{};
  int s = 1;
  Vec3 tau{0.0, 0.0, 1.0};
  double mass = 0.0;

  std::array<lcplx, 4> bar(const GammaBasis& b = GammaBasis::standard()) const {
    std::array<lcplx, 4> r{};
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) r[j] += std::conj(c[i]) * b.gamma[0](i, j);
    return r;
  }
};

namespace detail {
inline Bispinor make_mode_spinor(const Vec3& p, int s, const Vec3& tau, double mass, bool particle,
                                 const GammaBasis& b) {
  const double p0 = std::sqrt(mass * mass + norm2(p));
  const auto chi = pauli_eigenvector(tau, s);
  std::array<lcplx, 4> seed{};
  if (particle) {
    seed[0] = chi[0];
    seed[1] = chi[1];
  } else {
    seed[2] = chi[0];
    seed[3] = chi[1];
  }
  const Mat4c pslash = b.slash({p0, p});
  Mat4c proj = b.unit * lcplx(static_cast<long double>(mass));
  proj = particle ? proj + pslash : proj - pslash;
  const long double norm_f = 1.0L / std::sqrt(2.0L * static_cast<long double>(mass) * (p0 + mass));
  Bispinor u;
  u.p = p;
  u.s = s;
  u.tau = tau;
  u.mass = mass;
  for (int i = 0; i < 4; ++i) {
    lcplx acc{};
    for (int j = 0; j < 4; ++j) acc += proj(i, j) * seed[j];
    u.c[i] = acc * norm_f;
  }
  return u;
}
}  // namespace detail

inline Bispinor build_spinor(const Vec3& p, int s, const Vec3& tau, double mass,
                             const GammaBasis& b = GammaBasis::standard()) {
  return detail::make_mode_spinor(p, s, tau, mass, true, b);
}

// Antiparticle mode function v_s(p) = (m - pslash) / sqrt(2 m (p0 + m)) [0; chi_s].
inline Bispinor build_antispinor(const Vec3& p, int s, const Vec3& tau, double mass,
                                 const GammaBasis& b = GammaBasis::standard()) {
  return detail::make_mode_spinor(p, s, tau, mass, false, b);
}

// Outer product u ubar as a matrix.
inline Mat4c outer(const Bispinor& u, const GammaBasis& b = GammaBasis::standard()) {
  const auto ub = u.bar(b);
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = u.c[i] * ub[j];
  return r;
}

// (m + pslash)(1 - gamma5 sslash) / (4 m): the momentum-diagonal spin
// projector entering the squared matrix element.
inline Mat4c spin_projector(const Vec3& p, double mass, const Vec3& zeta,
                            const GammaBasis& b = GammaBasis::standard()) {
  const double p0 = std::sqrt(mass * mass + norm2(p));
  const Mat4c num = b.unit * lcplx(static_cast<long double>(mass)) + b.slash({p0, p});
  const FourVec s = SpinState{zeta}.s_mu(p, mass);
  const Mat4c pol = b.unit - b.gamma5 * b.slash(s);
  return (num * pol) * lcplx(1.0L / (4.0L * static_cast<long double>(mass)));
}

}  // namespace transrad
