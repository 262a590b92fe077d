// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "transrad/constants.hpp"
#include "transrad/dirac.hpp"
#include "transrad/kinematics.hpp"
#include "transrad/linalg.hpp"

namespace transrad {

// The brute-force route runs in quadruple precision: inside the traces the
// m^2-scale terms cancel down to the q^2 scale (a chi^2 gamma^-2 drop), and
// the route-equivalence gate wants pairwise 1e-10 on arbitrary kinematics.
namespace detail {

struct qc {
  __float128 re = 0, im = 0;
  constexpr qc() = default;
  constexpr qc(__float128 r, __float128 i) : re(r), im(i) {}
  qc operator+(const qc& o) const { return {re + o.re, im + o.im}; }
  qc operator-(const qc& o) const { return {re - o.re, im - o.im}; }
  qc operator*(const qc& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
};

struct QMat4 {
  std::array<qc, 16> a{};

  qc& operator()(int i, int j) { return a[4 * i + j]; }
  const qc& operator()(int i, int j) const { return a[4 * i + j]; }

  QMat4 operator+(const QMat4& o) const {
    QMat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  QMat4 operator-(const QMat4& o) const {
    QMat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  QMat4 operator*(const QMat4& o) const {
    QMat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const qc aik = (*this)(i, k);
        for (int j = 0; j < 4; ++j) r(i, j) = r(i, j) + aik * o(k, j);
      }
    return r;
  }
  QMat4 scaled(const qc& s) const {
    QMat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = a[i] * s;
    return r;
  }
  qc trace() const { return a[0] + a[5] + a[10] + a[15]; }
};

inline QMat4 to_quad(const Mat4c& m) {
  QMat4 r;
  for (int i = 0; i < 16; ++i)
    r.a[i] = qc(static_cast<__float128>(m.a[i].real()), static_cast<__float128>(m.a[i].imag()));
  return r;
}

struct QuadGammas {
  QMat4 gamma[4];
  QMat4 gamma5;
  QMat4 unit;
  QMat4 sigma[4][4];

  explicit QuadGammas(const GammaBasis& b) {
    for (int mu = 0; mu < 4; ++mu) gamma[mu] = to_quad(b.gamma[mu]);
    gamma5 = to_quad(b.gamma5);
    unit = to_quad(b.unit);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) sigma[mu][nu] = to_quad(b.sigma[mu][nu]);
  }

  // slash(a) = gamma^mu a_mu from quad components (a0; a1, a2, a3).
  QMat4 slash(__float128 a0, __float128 a1, __float128 a2, __float128 a3) const {
    QMat4 r = gamma[0].scaled(qc(a0, 0));
    r = r - gamma[1].scaled(qc(a1, 0));
    r = r - gamma[2].scaled(qc(a2, 0));
    r = r - gamma[3].scaled(qc(a3, 0));
    return r;
  }

  // a_mu sigma^{mu i} with covariant components of a.
  QMat4 sigma_contract(__float128 a0, __float128 a1, __float128 a2, __float128 a3, int i) const {
    QMat4 r = sigma[0][i].scaled(qc(a0, 0));
    r = r - sigma[1][i].scaled(qc(a1, 0));
    r = r - sigma[2][i].scaled(qc(a2, 0));
    r = r - sigma[3][i].scaled(qc(a3, 0));
    return r;
  }
};

inline __float128 qd_sqrt(__float128 a) {
  const double d = std::sqrt(static_cast<double>(a));
  __float128 x = d > 0.0 ? __float128(d) : __float128(1);
  for (int i = 0; i < 3; ++i) x = (x + a / x) / __float128(2);
  return x;
}

// Kinematics re-solved in quadruple precision from (p, k, m): the stored
// double p' violates the mass shell at 1e-16 p^2, which the traces amplify
// by gamma^2 m^2 / |q^2|.
struct QuadKinematics {
  __float128 p0, p0p, p3p, q3;
  __float128 px, py, pz, kx, ky, k0, k3;

  explicit QuadKinematics(const ScatteringKinematics& sk) {
    const __float128 m2 = static_cast<__float128>(sk.mass) * sk.mass;
    px = sk.p.x;
    py = sk.p.y;
    pz = sk.p.z;
    kx = sk.photon.k.x;
    ky = sk.photon.k.y;
    k0 = sk.photon.k0;
    k3 = sk.photon.k3;
    p0 = qd_sqrt(m2 + px * px + py * py + pz * pz);
    p0p = p0 - k0;
    const __float128 ppx = px - kx, ppy = py - ky;
    p3p = -qd_sqrt(p0p * p0p - ppx * ppx - ppy * ppy - m2);
    q3 = pz - p3p;
  }

  __float128 q_sq() const { return k3 * k3 - q3 * q3; }
  __float128 denominator(int r) const { return q3 - __float128(r) * k3; }
};

inline std::array<qc, 9> brute_force_tensor_qd(const ScatteringKinematics& sk,
                                               const ParticleParams& pp, const Vec3& zeta,
                                               const GammaBasis& basis) {
  const QuadGammas g(basis);
  const QuadKinematics qk(sk);
  const qc e(static_cast<__float128>(pp.charge), 0);
  const qc imua(0, static_cast<__float128>(pp.anomalous_moment));
  const qc mq(static_cast<__float128>(pp.mass), 0);

  const QMat4 m_plus_pprime =
      g.unit.scaled(mq) + g.slash(qk.p0p, qk.px - qk.kx, qk.py - qk.ky, qk.p3p);
  // (m + pslash)(1 - g5 sslash); the 1/(2m) and 1/2 of the projector sit in
  // the overall 1/4.
  const FourVec s = SpinState{zeta}.s_mu(sk.p, pp.mass);
  const QMat4 incident = (g.unit.scaled(mq) + g.slash(qk.p0, qk.px, qk.py, qk.pz)) *
                         (g.unit - g.gamma5 * g.slash(s.t, s.v.x, s.v.y, s.v.z));

  QMat4 vertex_left[3], vertex_right[3];
  for (int i = 0; i < 3; ++i) {
    const QMat4 qsig = g.sigma_contract(qk.k0, qk.kx, qk.ky, qk.q3, i + 1);
    vertex_left[i] = g.gamma[i + 1].scaled(e) - qsig.scaled(imua);
    vertex_right[i] = g.gamma[i + 1].scaled(e) + qsig.scaled(imua);
  }

  std::array<qc, 9> out{};
  const qc quarter(0.25, 0);
  for (int i = 0; i < 3; ++i) {
    const QMat4 left = vertex_left[i] * m_plus_pprime;
    for (int j = 0; j < 3; ++j)
      out[3 * i + j] = (left * vertex_right[j] * incident).trace() * quarter;
  }
  return out;
}

}  // namespace detail

// Brute-force evaluation of the squared-matrix-element tensor
//
//   M^{ij} = (1/4) tr{ [e g^i - i mu_a q_nu s^{nu i}] (m + pslash')
//                      [e g^j + i mu_a q_rho s^{rho j}] (m + pslash)(1 - g5 sslash) }
//
// by explicit 4x4 arithmetic; no trace identities. This is the independent
// verification route for the traced closed form used by the radiation module.
inline Mat3c brute_force_tensor(const ScatteringKinematics& sk, const ParticleParams& pp,
                                const Vec3& zeta, const GammaBasis& b = GammaBasis::standard()) {
  const auto t = detail::brute_force_tensor_qd(sk, pp, zeta, b);
  Mat3c out;
  for (int i = 0; i < 9; ++i)
    out.a[i] = cplx(static_cast<double>(t[i].re), static_cast<double>(t[i].im));
  return out;
}

// The brute-force tensor contracted with the polarization sum and the
// phase-space prefactor, entirely in extended precision: the third, fully
// independent route to the probability density.
inline double brute_force_density(const ScatteringKinematics& sk, const ParticleParams& pp,
                                  const Vec3& zeta, const PolarizationBasis& pol,
                                  const GammaBasis& b = GammaBasis::standard()) {
  using detail::qc;
  const auto m = detail::brute_force_tensor_qd(sk, pp, zeta, b);
  const detail::QuadKinematics qk(sk);
  qc acc(0, 0);
  for (int r : {+1, -1}) {
    const CVec3 fr = pol.f_reflected(r);
    const __float128 dr = qk.denominator(r);
    for (int rp : {+1, -1}) {
      const CVec3 frp = conj(pol.f_reflected(rp));
      const __float128 dd = dr * qk.denominator(rp);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const qc w = qc(fr[i].real(), fr[i].imag()) * qc(frp[j].real(), frp[j].imag());
          const qc mij = m[3 * i + j];
          acc = acc + qc((w * mij).re / dd, (w * mij).im / dd);
        }
    }
  }
  __float128 ppz = qk.p3p * qk.pz;
  if (ppz < 0) ppz = -ppz;
  const __float128 pref =
      __float128(1) / (__float128(32) * static_cast<__float128>(constants::pi) * constants::pi *
                       constants::pi * qk.k0 * ppz);
  return static_cast<double>(acc.re * pref);
}

}  // namespace transrad
