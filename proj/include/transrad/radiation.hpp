// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "transrad/constants.hpp"
#include "transrad/errors.hpp"
#include "transrad/kinematics.hpp"
#include "transrad/linalg.hpp"
#include "transrad/packets.hpp"
#include "transrad/spin.hpp"

namespace transrad {

// Per-coupling breakdown of a probability density: the e^2, e mu_a and
// mu_a^2 blocks of the squared matrix element.
struct RadiationTerms {
  double e2 = 0.0;
  double e_mua = 0.0;
  double mua2 = 0.0;

  double total() const { return e2 + e_mua + mua2; }
  RadiationTerms& operator+=(const RadiationTerms& o) {
    e2 += o.e2;
    e_mua += o.e_mua;
    mua2 += o.mua2;
    return *this;
  }
  RadiationTerms operator*(double s) const { return {e2 * s, e_mua * s, mua2 * s}; }
};

// The three coupling blocks of the traced curly bracket; complex 3x3, with
// the couplings included. Hermitian: M^{ij} = (M^{ji})^*.
struct BracketBlocks {
  Mat3c e2, e_mua, mua2;
};

namespace detail {

// The bracket entries run in extended precision: contracting them with the
// polarization vectors can cancel several orders of magnitude (e.g. when
// p.f happens to be small), and the route-equivalence checks require
// pairwise 1e-10 on arbitrary open kinematics.
using ldc = std::complex<long double>;

struct BracketBlocksLd {
  std::array<ldc, 9> e2{}, e_mua{}, mua2{};
};

// w^{ij} = a_mu b_nu eps^{mu nu i j} over covariant components; real and
// antisymmetric in (i, j).
inline std::array<long double, 9> eps_contract_ld(const FourVec& a, const FourVec& b) {
  std::array<long double, 9> t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      long double acc = 0.0L;
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          const int e = levi_civita4(mu, nu, i + 1, j + 1);
          if (e != 0)
            acc += static_cast<long double>(e) * static_cast<long double>(a.lower(mu)) *
                   static_cast<long double>(b.lower(nu));
        }
      t[3 * i + j] = acc;
    }
  return t;
}

inline BracketBlocksLd fin_bracket_blocks_ld(const ScatteringKinematics& sk,
                                             const ParticleParams& pp, const Vec3& zeta) {
  const long double m = pp.mass;
  const long double q2 = sk.q_sq;
  const FourVec q4 = sk.q4();
  const FourVec s4 = SpinState{zeta}.s_mu(sk.p, pp.mass);
  const long double qs = static_cast<long double>(q4.t) * s4.t -
                         (static_cast<long double>(q4.v.x) * s4.v.x +
                          static_cast<long double>(q4.v.y) * s4.v.y +
                          static_cast<long double>(q4.v.z) * s4.v.z);

  const auto T = eps_contract_ld(q4, s4);
  const auto U = eps_contract_ld(sk.p4(), q4);

  const long double ce2 = static_cast<long double>(pp.charge) * pp.charge;
  const long double cemu = static_cast<long double>(pp.charge) * pp.anomalous_moment;
  const long double cmu2 = static_cast<long double>(pp.anomalous_moment) * pp.anomalous_moment;

  BracketBlocksLd b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int ij = 3 * i + j;
      const long double delta = (i == j) ? 1.0L : 0.0L;
      const long double pi_ = sk.p[i], pj = sk.p[j];
      const long double pri = sk.p_prime[i], prj = sk.p_prime[j];
      const long double qi = sk.q[i], qj = sk.q[j];
      const long double psi = pi_ + pri, psj = pj + prj;

      b.e2[ij] = ce2 * ldc(pi_ * prj + pj * pri - delta * q2 / 2.0L, m * T[ij]);
      b.e_mua[ij] = cemu * ldc(-2.0L * m * q2 * delta - 2.0L * m * qi * qj,
                               (2.0L * m * m + q2 / 2.0L) * T[ij] + qs * U[ij]);
      b.mua2[ij] = cmu2 * ldc(q2 * (-2.0L * m * m * delta - psi * psj / 2.0L) -
                                  2.0L * m * m * qi * qj,
                              2.0L * m * (qs * U[ij] + (q2 / 2.0L) * T[ij]));
    }
  return b;
}

// sum_{r,r'} f_{ri} f*_{r'j} X^{ij} / (D_r D_{r'}) in extended precision.
inline std::array<long double, 3> contract_with_polarization(const BracketBlocksLd& b,
                                                             const ScatteringKinematics& sk,
                                                             const PolarizationBasis& pol) {
  ldc acc[3] = {};
  for (int r : {+1, -1}) {
    const CVec3 fr = pol.f_reflected(r);
    const long double dr = sk.denominator(r);
    for (int rp : {+1, -1}) {
      const CVec3 frp = conj(pol.f_reflected(rp));
      const long double dd = dr * static_cast<long double>(sk.denominator(rp));
      for (int i = 0; i < 3; ++i) {
        const ldc fri(fr[i].real(), fr[i].imag());
        for (int j = 0; j < 3; ++j) {
          const ldc w = fri * ldc(frp[j].real(), frp[j].imag()) / dd;
          const int ij = 3 * i + j;
          acc[0] += w * b.e2[ij];
          acc[1] += w * b.e_mua[ij];
          acc[2] += w * b.mua2[ij];
        }
      }
    }
  }
  return {acc[0].real(), acc[1].real(), acc[2].real()};
}

inline long double prefactor(const ScatteringKinematics& sk) {
  return 1.0L / (32.0L * static_cast<long double>(constants::pi) * constants::pi * constants::pi *
                 sk.photon.k0 * std::abs(static_cast<long double>(sk.p_prime.z) * sk.p.z));
}

}  // namespace detail

// Traced closed form of the squared matrix element (conventions:
// eps^{0123} = +1, eta^{ij} = -delta_ij, p^{(i} p'^{j)} without 1/2).
inline BracketBlocks fin_bracket_blocks(const ScatteringKinematics& sk, const ParticleParams& pp,
                                        const Vec3& zeta) {
  const detail::BracketBlocksLd b = detail::fin_bracket_blocks_ld(sk, pp, zeta);
  BracketBlocks out;
  for (int i = 0; i < 9; ++i) {
    out.e2.a[i] = cplx(static_cast<double>(b.e2[i].real()), static_cast<double>(b.e2[i].imag()));
    out.e_mua.a[i] =
        cplx(static_cast<double>(b.e_mua[i].real()), static_cast<double>(b.e_mua[i].imag()));
    out.mua2.a[i] =
        cplx(static_cast<double>(b.mua2[i].real()), static_cast<double>(b.mua2[i].imag()));
  }
  return out;
}

// Probability density w.r.t. d^3k at fixed incident momentum (the c(p)
// weight is applied by the integrator): the full bracket contracted with
// sum_{r,r'} f_r f*_{r'} / (D_r D_{r'}), times 1/(32 pi^3 k0 |p3' p3|).
inline RadiationTerms integrand_general(const ScatteringKinematics& sk,
                                        const PolarizationBasis& pol, const ParticleParams& pp,
                                        const Vec3& zeta) {
  const auto acc =
      detail::contract_with_polarization(detail::fin_bracket_blocks_ld(sk, pp, zeta), sk, pol);
  const long double pref = detail::prefactor(sk);
  return {static_cast<double>(acc[0] * pref), static_cast<double>(acc[1] * pref),
          static_cast<double>(acc[2] * pref)};
}

inline RadiationTerms integrand_general(const Vec3& p, const PhotonKinematics& photon,
                                        const PolarizationBasis& pol, const ParticleParams& pp,
                                        const Vec3& zeta) {
  return integrand_general(solve_final_momentum(p, photon, pp.mass), pol, pp, zeta);
}

// Same value through the closed contraction identities (fast path). The
// r-sums collapse to F = -(2/q^2)[k3 f + (q3 - k3) e3 f3]; requires the
// common-phase convention Im f3 = 0.
inline RadiationTerms integrand_contracted(const ScatteringKinematics& sk,
                                           const PolarizationBasis& pol, const ParticleParams& pp,
                                           const Vec3& zeta) {
  if (!pol.f3_is_real())
    throw std::invalid_argument("integrand_contracted: requires a polarization with real f3");
  using ldc = detail::ldc;
  const long double m = pp.mass;
  const long double q2 = sk.q_sq;
  const long double q4 = q2 * q2;
  const long double k3 = sk.photon.k3;
  const long double q3 = sk.q3;
  const long double f3 = pol.f.z.real();

  // A = k3 (p.f) + (q3 - k3) p3 f3
  const ldc pf = ldc(static_cast<long double>(sk.p.x) * pol.f.x.real() +
                         static_cast<long double>(sk.p.y) * pol.f.y.real() +
                         static_cast<long double>(sk.p.z) * pol.f.z.real(),
                     static_cast<long double>(sk.p.x) * pol.f.x.imag() +
                         static_cast<long double>(sk.p.y) * pol.f.y.imag() +
                         static_cast<long double>(sk.p.z) * pol.f.z.imag());
  const ldc A = k3 * pf + (q3 - k3) * static_cast<long double>(sk.p.z) * f3;
  const long double c_pp = (8.0L / q4) * (std::norm(A) + q2 * f3 * A.real());
  const long double c_eta = (4.0L / q4) * (q2 * f3 * f3 - k3 * k3);
  const long double c_qq = 4.0L * f3 * f3;
  const long double c_sum = (16.0L / q4) * std::norm(A + q2 * f3 / 2.0L);

  // Spin structures contracted with F_i conj(F_j),
  // F = -(2/q^2)[k3 f + (q3 - k3) e3 f3].
  const FourVec q4v = sk.q4();
  const FourVec s4 = SpinState{zeta}.s_mu(sk.p, pp.mass);
  const long double qs = static_cast<long double>(q4v.t) * s4.t -
                         (static_cast<long double>(q4v.v.x) * s4.v.x +
                          static_cast<long double>(q4v.v.y) * s4.v.y +
                          static_cast<long double>(q4v.v.z) * s4.v.z);
  const ldc scale(-2.0L / q2);
  const ldc F[3] = {scale * ldc(k3 * pol.f.x.real(), k3 * pol.f.x.imag()),
                    scale * ldc(k3 * pol.f.y.real(), k3 * pol.f.y.imag()),
                    scale * ldc(k3 * pol.f.z.real() + (q3 - k3) * f3, k3 * pol.f.z.imag())};
  auto spin_contract = [&](const std::array<long double, 9>& t) {
    ldc acc{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (t[3 * i + j] != 0.0L) acc += t[3 * i + j] * F[i] * std::conj(F[j]);
    return -acc.imag();  // Re[i * acc]
  };
  const long double s_qs = spin_contract(detail::eps_contract_ld(q4v, s4));
  const long double s_pq = spin_contract(detail::eps_contract_ld(sk.p4(), q4v));

  const long double e = pp.charge;
  const long double mua = pp.anomalous_moment;
  const long double t_e2 = e * e * (c_pp + (q2 / 2.0L) * c_eta + m * s_qs);
  const long double t_emu =
      e * mua *
      (2.0L * m * q2 * c_eta - 2.0L * m * c_qq + (2.0L * m * m + q2 / 2.0L) * s_qs + qs * s_pq);
  const long double t_mu2 = mua * mua *
                            (q2 * (2.0L * m * m * c_eta - c_sum / 2.0L) - 2.0L * m * m * c_qq +
                             2.0L * m * (qs * s_pq + (q2 / 2.0L) * s_qs));

  const long double pref = detail::prefactor(sk);
  return {static_cast<double>(t_e2 * pref), static_cast<double>(t_emu * pref),
          static_cast<double>(t_mu2 * pref)};
}

inline RadiationTerms integrand_contracted(const Vec3& p, const PhotonKinematics& photon,
                                           const PolarizationBasis& pol, const ParticleParams& pp,
                                           const Vec3& zeta) {
  return integrand_contracted(solve_final_momentum(p, photon, pp.mass), pol, pp, zeta);
}

// Polarization-summed bracket for normal-incidence class packets; exact in
// the recoil, independent of the effective spin.
inline RadiationTerms integrand_polarization_summed(const ScatteringKinematics& sk,
                                                    const ParticleParams& pp) {
  const double q2 = sk.q_sq;
  const double np2 = sk.photon.n_perp * sk.photon.n_perp;
  const double k3 = sk.photon.k3;
  const double x = 2.0 * sk.p.z * sk.q3 / q2 + 1.0;
  const double x2 = x * x;
  const double e = pp.charge;
  const double mua = pp.anomalous_moment;
  const double m = pp.mass;
  const double pref =
      1.0 / (16.0 * std::pow(constants::pi, 3) * sk.photon.k0 * std::abs(sk.p_prime.z * sk.p.z));
  const double two_k32_q2 = 2.0 * k3 * k3 / q2;
  return {(e * e * np2 * x2 - e * e * two_k32_q2) * pref,
          (-4.0 * e * m * mua * two_k32_q2) * pref,
          (-q2 * mua * mua * np2 * x2 - 4.0 * m * m * mua * mua * two_k32_q2) * pref};
}

enum class Method { GeneralQuadrature, ContractionFastPath, ClosedForm };

struct RadiationResult {
  double value = 0.0;  // dP/d^3k
  RadiationTerms terms{};
  Method method = Method::GeneralQuadrature;
  std::string closed_form_name{};
  double quad_error = 0.0;  // relative estimate from the level ladder
  std::vector<std::string> warnings{};

  double per_dk0_domega(double k0) const { return value * k0 * k0; }
};

struct QuadratureOptions {
  double rtol = 1e-4;
  Method method = Method::ContractionFastPath;
  int max_level = 5;
  double closed_mass_tol = 1e-6;
};

namespace detail {

template <typename Integrand>
RadiationResult integrate_packet(const WavePacket& packet, const PhotonKinematics& photon,
                                 const ParticleParams& pp, const QuadratureOptions& opt,
                                 Integrand&& integrand) {
  RadiationResult res;
  res.method = opt.method;
  RadiationTerms prev{};
  bool have_prev = false;
  for (int level = 0; level <= opt.max_level; ++level) {
    RadiationTerms acc{};
    double closed_mass = 0.0, total_mass = 0.0;
    for (const QuadNode& node : packet.quadrature(level)) {
      total_mass += node.w;
      try {
        const ScatteringKinematics sk = solve_final_momentum(node.p, photon, pp.mass);
        acc += integrand(sk, node.p) * node.w;
      } catch (const ChannelClosedError&) {
        closed_mass += node.w;
      }
    }
    if (closed_mass > opt.closed_mass_tol * total_mass)
      throw ChannelClosedOnSupportError(
          "channel closed on " + std::to_string(closed_mass / total_mass) +
          " of the packet mass at k0 = " + std::to_string(photon.k0));
    if (closed_mass > 0.0)
      res.warnings.push_back("kinematically closed mass fraction " +
                             std::to_string(closed_mass / total_mass) + " treated as zero");
    if (have_prev) {
      const double scale = std::abs(acc.total()) + 1e-300;
      res.quad_error = std::abs(acc.total() - prev.total()) / scale;
      if (res.quad_error < opt.rtol) {
        res.terms = acc;
        res.value = acc.total();
        return res;
      }
    }
    prev = acc;
    have_prev = true;
  }
  res.terms = prev;
  res.value = prev.total();
  res.warnings.push_back("quadrature did not reach rtol = " + std::to_string(opt.rtol) +
                         "; error estimate " + std::to_string(res.quad_error));
  return res;
}

}  // namespace detail

// Inclusive probability density dP/d^3k: quadrature of the integrand over
// the packet momentum density c(p) with the packet-aligned product rule.
inline RadiationResult probability(const WavePacket& packet, const PhotonKinematics& photon,
                                   const PolarizationBasis& pol, const ParticleParams& pp,
                                   const QuadratureOptions& opt = {}) {
  auto result = detail::integrate_packet(
      packet, photon, pp, opt, [&](const ScatteringKinematics& sk, const Vec3& p) {
        const Vec3 zeta = packet.zeta(p);
        return opt.method == Method::GeneralQuadrature
                   ? integrand_general(sk, pol, pp, zeta)
                   : integrand_contracted(sk, pol, pp, zeta);
      });
  for (const auto& w : packet.warnings()) result.warnings.push_back(w);
  return result;
}

// Probability summed over photon polarizations. Uses the closed
// normal-incidence bracket when the packet is concentrated near p_perp = 0,
// otherwise falls back to the sum of the two linear polarizations. Both
// routes are independent of the effective spin.
inline RadiationResult probability_polarization_summed(const WavePacket& packet,
                                                       const PhotonKinematics& photon,
                                                       const ParticleParams& pp,
                                                       const QuadratureOptions& opt = {}) {
  if (packet.is_normal_incidence_class()) {
    auto result = detail::integrate_packet(
        packet, photon, pp, opt,
        [&](const ScatteringKinematics& sk, const Vec3&) {
          return integrand_polarization_summed(sk, pp);
        });
    for (const auto& w : packet.warnings()) result.warnings.push_back(w);
    return result;
  }
  const PolarizationBasis in_plane = build_polarization(photon, PolarizationMode::LinearInPlane);
  const PolarizationBasis ortho = build_polarization(photon, PolarizationMode::LinearOrthogonal);
  RadiationResult a = probability(packet, photon, in_plane, pp, opt);
  const RadiationResult b = probability(packet, photon, ortho, pp, opt);
  a.terms += b.terms;
  a.value = a.terms.total();
  a.quad_error = std::max(a.quad_error, b.quad_error);
  a.warnings.insert(a.warnings.end(), b.warnings.begin(), b.warnings.end());
  a.warnings.push_back("polarization sum via two linear modes (packet not normal-incidence class)");
  return a;
}

// Small-recoil linear-polarization integrand of the charge-only (mu_a = 0)
// probability: e^2 |k3 (p.f) + (q3 - k3) p3 f3|^2 / (p3^2 (q^2)^2 4 pi^3 k0)
// with the small-recoil approximants for q3 and q^2. Spin independent.
inline double integrand_small_recoil_charge(const Vec3& p, const PhotonKinematics& photon,
                                            const PolarizationBasis& pol,
                                            const ParticleParams& pp) {
  if (!pol.is_real())
    throw std::invalid_argument("integrand_small_recoil_charge: linear polarization required");
  const double p0 = std::sqrt(pp.mass * pp.mass + norm2(p));
  const double beta3 = p.z / p0;
  const double bn = (p.x * photon.n.x + p.y * photon.n.y) / p0;
  const double q3 = photon.k0 * (1.0 - bn) / beta3;
  const double q2 = -photon.k0 * photon.k0 *
                    ((1.0 - bn) * (1.0 - bn) - beta3 * beta3 * photon.n3 * photon.n3) /
                    (beta3 * beta3);
  const double k3 = photon.k3;
  const double f3 = pol.f.z.real();
  const double a = k3 * dot(p, pol.f).real() + (q3 - k3) * p.z * f3;
  return pp.charge * pp.charge * a * a /
         (p.z * p.z * q2 * q2 * 4.0 * std::pow(constants::pi, 3) * photon.k0);
}

// Same regime for a neutral particle (e = 0):
// -mu_a^2 [m^2 k3^2 + |k3 (p.f) + (q3 - k3) p3 f3|^2] / (p3^2 q^2 4 pi^3 k0).
inline double integrand_small_recoil_moment(const Vec3& p, const PhotonKinematics& photon,
                                            const PolarizationBasis& pol,
                                            const ParticleParams& pp) {
  if (!pol.is_real())
    throw std::invalid_argument("integrand_small_recoil_moment: linear polarization required");
  const double p0 = std::sqrt(pp.mass * pp.mass + norm2(p));
  const double beta3 = p.z / p0;
  const double bn = (p.x * photon.n.x + p.y * photon.n.y) / p0;
  const double q3 = photon.k0 * (1.0 - bn) / beta3;
  const double q2 = -photon.k0 * photon.k0 *
                    ((1.0 - bn) * (1.0 - bn) - beta3 * beta3 * photon.n3 * photon.n3) /
                    (beta3 * beta3);
  const double k3 = photon.k3;
  const double f3 = pol.f.z.real();
  const double a = k3 * dot(p, pol.f).real() + (q3 - k3) * p.z * f3;
  const double mua = pp.anomalous_moment;
  return -mua * mua * (pp.mass * pp.mass * k3 * k3 + a * a) /
         (p.z * p.z * q2 * 4.0 * std::pow(constants::pi, 3) * photon.k0);
}

enum class ClosedFormName {
  OrthoPolNormal,
  OrthoPolNonrel,
  SummedPolSmallRecoil,
  TwistedE_inplane,
  TwistedE_ortho,
  TwistedN_inplane,
  TwistedN_ortho,
};

inline std::optional<ClosedFormName> closed_form_from_string(const std::string& s) {
  if (s == "OrthoPolNormal") return ClosedFormName::OrthoPolNormal;
  if (s == "OrthoPolNonrel") return ClosedFormName::OrthoPolNonrel;
  if (s == "SummedPolSmallRecoil") return ClosedFormName::SummedPolSmallRecoil;
  if (s == "TwistedE_inplane") return ClosedFormName::TwistedE_inplane;
  if (s == "TwistedE_ortho") return ClosedFormName::TwistedE_ortho;
  if (s == "TwistedN_inplane") return ClosedFormName::TwistedN_inplane;
  if (s == "TwistedN_ortho") return ClosedFormName::TwistedN_ortho;
  return std::nullopt;
}

inline const char* to_string(ClosedFormName n) {
  switch (n) {
    case ClosedFormName::OrthoPolNormal: return "OrthoPolNormal";
    case ClosedFormName::OrthoPolNonrel: return "OrthoPolNonrel";
    case ClosedFormName::SummedPolSmallRecoil: return "SummedPolSmallRecoil";
    case ClosedFormName::TwistedE_inplane: return "TwistedE_inplane";
    case ClosedFormName::TwistedE_ortho: return "TwistedE_ortho";
    case ClosedFormName::TwistedN_inplane: return "TwistedN_inplane";
    case ClosedFormName::TwistedN_ortho: return "TwistedN_ortho";
  }
  return "?";
}

struct ClosedFormArgs {
  ParticleParams params{};
  PhotonKinematics photon{};
  double p_long = 0.0;      // longitudinal momentum center, < 0
  double sigma_perp = 0.0;  // twisted forms
  int l = 0;                // twisted forms
};

// Literal evaluation of the closed forms, including the first-order
// (|l|+1) sigma_perp^2 correction brackets for the twisted states.
inline RadiationResult closed_form(ClosedFormName name, const ClosedFormArgs& a) {
  const double m = a.params.mass;
  const double e = a.params.charge;
  const double mua = a.params.anomalous_moment;
  const double k0 = a.photon.k0;
  const double n3 = a.photon.n3;
  const double np = a.photon.n_perp;
  const double n32 = n3 * n3, np2 = np * np;
  const double p2 = a.p_long * a.p_long;
  const double gamma2 = 1.0 + p2 / (m * m);
  const double beta32 = p2 / (m * m * gamma2);
  const double pi3 = std::pow(constants::pi, 3);
  const double denom_ng = n32 + np2 * gamma2;  // = (m^2 + n_perp^2 p^2) / m^2
  const double lp1s = (std::abs(a.l) + 1.0) * a.sigma_perp * a.sigma_perp;
  const double mnp2 = m * m + np2 * p2;

  RadiationResult res;
  res.method = Method::ClosedForm;
  res.closed_form_name = to_string(name);

  if (a.p_long != 0.0) {
    const double chi = k0 * std::sqrt(m * m + p2) / p2;
    if (chi > 0.1)
      res.warnings.push_back("closed form outside small-recoil regime: chi = " +
                             std::to_string(chi));
  }
  if (lp1s > 0.01 * m * m)
    res.warnings.push_back("closed form outside paraxial regime: (|l|+1) sigma_perp^2 / m^2 = " +
                           std::to_string(lp1s / (m * m)));

  auto split_charge_moment = [&](double coeff) {
    // coeff * (e + 2 m mu_a)^2 split into coupling blocks
    return RadiationTerms{coeff * e * e, coeff * 4.0 * e * m * mua,
                          coeff * 4.0 * m * m * mua * mua};
  };

  switch (name) {
    case ClosedFormName::OrthoPolNormal:
      res.terms = split_charge_moment(n32 / (m * m * denom_ng) / (16.0 * pi3 * k0));
      break;
    case ClosedFormName::OrthoPolNonrel:
      res.terms = split_charge_moment(n32 / (m * m) / (16.0 * pi3 * k0));
      break;
    case ClosedFormName::SummedPolSmallRecoil: {
      const double pref = 1.0 / (8.0 * pi3 * k0 * denom_ng);
      res.terms = split_charge_moment(n32 / (m * m) / (8.0 * pi3 * k0 * denom_ng));
      res.terms.e2 += 2.0 * np2 * gamma2 * e * e * beta32 * gamma2 / (k0 * k0 * denom_ng) * pref;
      res.terms.mua2 += 2.0 * np2 * gamma2 * mua * mua * pref;
      break;
    }
    case ClosedFormName::TwistedE_inplane: {
      const double lead = np2 * (m * m + p2);
      const double corr = lp1s / (mnp2 * mnp2) *
                          (std::pow(m, 4) * (1.0 - 10.0 * np2 + 10.0 * np2 * np2) -
                           2.0 * m * m * p2 * np2 * (5.0 - 7.0 * np2 + np2 * np2) +
                           p2 * p2 * np2 * np2);
      res.terms.e2 = e * e * p2 / (mnp2 * mnp2) * (lead + corr) / (4.0 * pi3 * k0 * k0 * k0);
      break;
    }
    case ClosedFormName::TwistedE_ortho:
      res.terms.e2 =
          e * e * p2 * lp1s / (mnp2 * mnp2) * n32 / (4.0 * pi3 * k0 * k0 * k0);
      break;
    case ClosedFormName::TwistedN_inplane:
      res.terms.mua2 = mua * mua * (1.0 - lp1s * n32 / mnp2) / (4.0 * pi3 * k0);
      break;
    case ClosedFormName::TwistedN_ortho: {
      const double corr = lp1s / (mnp2 * mnp2) *
                          (std::pow(m, 4) * (1.0 - 3.0 * np2) -
                           m * m * p2 * np2 * (4.0 - np2) - p2 * p2 * np2 * np2);
      res.terms.mua2 = mua * mua / mnp2 * (m * m - corr) * n32 / (4.0 * pi3 * k0);
      break;
    }
  }
  res.value = res.terms.total();
  return res;
}

// Kinetic energy at which the non-paraxial orthogonal-polarization term
// overtakes the quantum-recoil contribution:
// (|l|+1) sigma_perp^2 / m^2 = k0^2 (n3^2 + n_perp^2 gamma^2) / p^2.
inline double twisted_dominance_threshold_kinetic(const ParticleParams& pp, double sigma_perp,
                                                  int l, double k0, double theta = 0.0) {
  const double m = pp.mass;
  const double lp1s = (std::abs(l) + 1.0) * sigma_perp * sigma_perp;
  const double c = k0 * k0 * m * m / lp1s;  // p^2 threshold at theta = 0
  const double np2 = std::sin(theta) * std::sin(theta);
  const double denom = 1.0 - c * np2 / (m * m);
  if (denom <= 0.0)
    throw RegimeViolationError(
        "twisted_dominance_threshold_kinetic: no finite threshold at this angle");
  const double p2 = c / denom;
  return std::sqrt(m * m + p2) - m;
}

// (k0, theta, phi) grid of probabilities; per-point failures are recorded
// in the row, never abort the scan.
struct ScanGrid {
  std::vector<double> k0;
  std::vector<double> theta;
  std::vector<double> phi;
};

struct ScanPoint {
  double k0 = 0.0, theta = 0.0, phi = 0.0;
  RadiationResult result{};
  bool failed = false;
  std::string error{};
};

struct DetectorScan {
  std::vector<ScanPoint> points;  // row-major in (k0, theta, phi)
};

inline unsigned scan_thread_count() {
  if (const char* env = std::getenv("TRANSRAD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

// Evaluate a callable over the grid with a worker pool; output is assembled
// in grid order regardless of completion order.
inline DetectorScan scan_with(const ScanGrid& grid,
                              const std::function<RadiationResult(const PhotonKinematics&)>& eval) {
  DetectorScan out;
  const std::size_t n = grid.k0.size() * grid.theta.size() * grid.phi.size();
  out.points.resize(n);
  const std::size_t nth = grid.theta.size(), nph = grid.phi.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= n) return;
      ScanPoint& pt = out.points[idx];
      pt.k0 = grid.k0[idx / (nth * nph)];
      pt.theta = grid.theta[(idx / nph) % nth];
      pt.phi = grid.phi[idx % nph];
      try {
        pt.result = eval(PhotonKinematics::from_angles(pt.k0, pt.theta, pt.phi));
      } catch (const std::exception& ex) {
        pt.failed = true;
        pt.error = ex.what();
      }
    }
  };
  const unsigned nworkers = std::min<std::size_t>(scan_thread_count(), n ? n : 1);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nworkers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

// Per-point inclusive probability over the grid; nullopt polarization means
// the polarization-summed probability.
inline DetectorScan scan(const WavePacket& packet, const ScanGrid& grid,
                         std::optional<PolarizationMode> pol, const ParticleParams& pp,
                         const QuadratureOptions& opt = {}) {
  return scan_with(grid, [&](const PhotonKinematics& photon) {
    if (!pol) return probability_polarization_summed(packet, photon, pp, opt);
    return probability(packet, photon, build_polarization(photon, *pol), pp, opt);
  });
}

}  // namespace transrad
