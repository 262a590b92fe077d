// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "transrad/constants.hpp"
#include "transrad/errors.hpp"
#include "transrad/linalg.hpp"

namespace transrad {

// Coupling constants of the Dirac particle: mass m, charge e (e^2 = 4 pi
// alpha for a unit charge) and anomalous moment mu_a = a e / (2 m).
struct ParticleParams {
  double mass = 0.0;              // eV
  double charge = 0.0;            // dimensionless
  double anomaly = 0.0;           // a, dimensionless
  double anomalous_moment = 0.0;  // mu_a, 1/eV

  // e + 2 m mu_a; equals e (1 + a) for a charged particle.
  double charge_plus_2m_mua() const { return charge + 2.0 * mass * anomalous_moment; }

  static ParticleParams charged(double mass, double charge, double anomaly) {
    if (mass <= 0.0) throw std::invalid_argument("ParticleParams: mass must be positive");
    ParticleParams p;
    p.mass = mass;
    p.charge = charge;
    p.anomaly = anomaly;
    p.anomalous_moment = anomaly * charge / (2.0 * mass);
    return p;
  }

  // Neutral particle: the anomalous moment is the only coupling.
  static ParticleParams neutral(double mass, double anomalous_moment) {
    if (mass <= 0.0) throw std::invalid_argument("ParticleParams: mass must be positive");
    ParticleParams p;
    p.mass = mass;
    p.anomalous_moment = anomalous_moment;
    return p;
  }

  static ParticleParams electron(double anomaly = 0.0) {
    return charged(constants::electron_mass_ev, -unit_charge(), anomaly);
  }

  static ParticleParams neutron() {
    const double mu_n = constants::neutron_kappa * unit_charge() / (2.0 * constants::proton_mass_ev);
    return neutral(constants::neutron_mass_ev, mu_n);
  }
};

// Photon energy and direction. The detector sits at z > 0, so n3 >= 0;
// theta = pi/2 (grazing) is excluded.
struct PhotonKinematics {
  double k0 = 0.0;     // eV
  double theta = 0.0;  // [0, pi/2)
  double phi = 0.0;    // [0, 2 pi)
  Vec3 n{};            // unit direction
  double n_perp = 0.0; // sin(theta)
  double n3 = 1.0;     // cos(theta)
  Vec3 k{};            // k0 * n
  double k3 = 0.0;     // k0 * n3

  static PhotonKinematics from_angles(double k0, double theta, double phi) {
    if (!(k0 > 0.0)) throw std::invalid_argument("PhotonKinematics: k0 must be positive");
    if (!(theta >= 0.0 && theta < constants::pi / 2.0))
      throw std::invalid_argument("PhotonKinematics: theta must lie in [0, pi/2)");
    PhotonKinematics ph;
    ph.k0 = k0;
    ph.theta = theta;
    ph.phi = phi;
    ph.n_perp = std::sin(theta);
    ph.n3 = std::cos(theta);
    ph.n = {ph.n_perp * std::cos(phi), ph.n_perp * std::sin(phi), ph.n3};
    ph.k = k0 * ph.n;
    ph.k3 = k0 * ph.n3;
    return ph;
  }
};

enum class PolarizationMode { HelicityPlus, HelicityMinus, LinearInPlane, LinearOrthogonal, Custom };

inline const char* to_string(PolarizationMode m) {
  switch (m) {
    case PolarizationMode::HelicityPlus: return "helicity+";
    case PolarizationMode::HelicityMinus: return "helicity-";
    case PolarizationMode::LinearInPlane: return "in_plane";
    case PolarizationMode::LinearOrthogonal: return "orthogonal";
    case PolarizationMode::Custom: return "custom";
  }
  return "?";
}

// Polarization vector f with f.n = 0, f.f* = 1, and the mirror-reflected
// combinations f_r = r f + (1 - r) e3 f3 entering the mode functions.
struct PolarizationBasis {
  PolarizationMode mode = PolarizationMode::LinearInPlane;
  CVec3 f{};

  // f_r = r f + (1 - r) e3 f3: transverse components flip with r, f3 stays.
  CVec3 f_reflected(int r) const {
    const double rr = static_cast<double>(r);
    return {rr * f.x, rr * f.y, f.z};
  }

  bool f3_is_real(double tol = 1e-14) const { return std::abs(f.z.imag()) <= tol * (1.0 + std::abs(f.z)); }
  bool is_real(double tol = 1e-14) const {
    return std::abs(f.x.imag()) <= tol && std::abs(f.y.imag()) <= tol && std::abs(f.z.imag()) <= tol;
  }
};

// Helicity vector (cos phi cos theta - i l sin phi, sin phi cos theta + i l cos phi,
// -sin theta)/sqrt(2); the linear modes are its real and imaginary parts.
inline PolarizationBasis build_polarization(const PhotonKinematics& ph, PolarizationMode mode,
                                            const CVec3& custom = {}) {
  const double ct = ph.n3, st = ph.n_perp;
  const double cp = std::cos(ph.phi), sp = std::sin(ph.phi);
  const Vec3 in_plane{ct * cp, ct * sp, -st};
  const Vec3 ortho{-sp, cp, 0.0};

  PolarizationBasis b;
  b.mode = mode;
  switch (mode) {
    case PolarizationMode::HelicityPlus:
    case PolarizationMode::HelicityMinus: {
      const double lambda = (mode == PolarizationMode::HelicityPlus) ? 1.0 : -1.0;
      const cplx i_l(0.0, lambda);
      const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      b.f = {(in_plane.x + i_l * ortho.x) * inv_sqrt2, (in_plane.y + i_l * ortho.y) * inv_sqrt2,
             (in_plane.z + i_l * ortho.z) * inv_sqrt2};
      break;
    }
    case PolarizationMode::LinearInPlane:
      b.f = to_complex(in_plane);
      break;
    case PolarizationMode::LinearOrthogonal:
      b.f = to_complex(ortho);
      break;
    case PolarizationMode::Custom: {
      const double n2 = norm2(custom);
      if (std::abs(n2 - 1.0) > 1e-10) throw std::invalid_argument("custom polarization: |f| != 1");
      if (std::abs(dot(ph.n, custom)) > 1e-10)
        throw std::invalid_argument("custom polarization: f not transverse to n");
      b.f = custom;
      break;
    }
  }
  return b;
}

// Scattering kinematics on the sigma = -1 branch: p' fixed by energy and
// transverse-momentum conservation plus the mass shell.
struct ScatteringKinematics {
  double mass = 0.0;
  Vec3 p{};          // incident momentum, p.z < 0
  double p0 = 0.0;   // sqrt(m^2 + p^2)
  PhotonKinematics photon{};
  Vec3 p_prime{};    // outgoing momentum, sigma = -1 branch
  double p0_prime = 0.0;
  double q3 = 0.0;   // p3 - p3' < 0 (stable evaluation)
  Vec3 q{};          // (k_perp, q3) = p - p'
  double q_sq = 0.0; // q^2 = k3^2 - q3^2 < 0
  double chi = 0.0;  // quantum recoil parameter k0 / (p3 beta3) > 0
  double gamma = 0.0;
  double beta3 = 0.0;      // p3 / p0 < 0
  Vec3 beta_perp{};        // (px, py, 0) / p0
  double radicand = 0.0;   // p3'^2

  double k0() const { return photon.k0; }
  double k3() const { return photon.k3; }

  // Denominator q3 - r k3 of the boundary integral; strictly negative for
  // both r on every open kinematic point, so the +-i0 prescription drops.
  double denominator(int r) const { return q3 - static_cast<double>(r) * photon.k3; }

  // Mirror-image scattering branch (sigma = +1). Diagnostic only; never
  // enters any probability.
  double p3_prime_sigma_plus() const { return std::sqrt(radicand); }

  // Independent q^2 route 2 (m^2 - p.p'), recomputed end to end from (p, k)
  // in quadruple precision: the 4-product cancels down to the q^2 scale,
  // which sits chi^2 gamma^-2 below p^2 and is unreachable in double.
  double q_sq_from_four_product() const {
    using quad = __float128;
    auto qsqrt = [](quad a) {
      double d = std::sqrt(static_cast<double>(a));
      quad x = d > 0.0 ? quad(d) : quad(1);
      for (int i = 0; i < 3; ++i) x = (x + a / x) / quad(2);  // Newton
      return x;
    };
    const quad m2 = quad(mass) * quad(mass);
    const quad px = p.x, py = p.y, pz = p.z;
    const quad p0q = qsqrt(m2 + px * px + py * py + pz * pz);
    const quad p0p = p0q - quad(photon.k0);
    const quad ppx = px - quad(photon.k.x), ppy = py - quad(photon.k.y);
    const quad rad = p0p * p0p - ppx * ppx - ppy * ppy - m2;
    const quad p3p = -qsqrt(rad);
    const quad pp4 = p0q * p0p - (px * ppx + py * ppy + pz * p3p);
    return static_cast<double>(quad(2) * (m2 - pp4));
  }

  FourVec p4() const { return {p0, p}; }
  FourVec p_prime4() const { return {p0_prime, p_prime}; }
  FourVec q4() const { return {photon.k0, q}; }
};

inline ScatteringKinematics solve_final_momentum(const Vec3& p, const PhotonKinematics& photon,
                                                 double mass) {
  if (!(p.z < 0.0)) throw std::invalid_argument("solve_final_momentum: incident p3 must be negative");
  ScatteringKinematics sk;
  sk.mass = mass;
  sk.p = p;
  sk.photon = photon;
  sk.p0 = std::sqrt(mass * mass + norm2(p));
  sk.p0_prime = sk.p0 - photon.k0;
  if (!(sk.p0_prime > mass))
    throw ChannelClosedError("channel closed: p0 - k0 <= m (photon too energetic)");

  const Vec3 k_perp{photon.k.x, photon.k.y, 0.0};
  const Vec3 p_perp{p.x, p.y, 0.0};
  // p3'^2 = p3^2 - 2 k0 p0 + 2 k_perp.p_perp + k3^2
  const double nu = 2.0 * photon.k0 * sk.p0 - 2.0 * dot(k_perp, p_perp) - photon.k3 * photon.k3;
  sk.radicand = p.z * p.z - nu;
  if (!(sk.radicand > 0.0))
    throw ChannelClosedError("channel closed: longitudinal radicand non-positive");

  const double p3p_mag = std::sqrt(sk.radicand);
  sk.p_prime = {p.x - k_perp.x, p.y - k_perp.y, -p3p_mag};
  // q3 = p3 - p3' evaluated as a quotient to avoid cancellation.
  sk.q3 = -nu / (-p.z + p3p_mag);
  sk.q = {k_perp.x, k_perp.y, sk.q3};
  sk.q_sq = photon.k3 * photon.k3 - sk.q3 * sk.q3;

  sk.gamma = sk.p0 / mass;
  sk.beta3 = p.z / sk.p0;
  sk.beta_perp = {p.x / sk.p0, p.y / sk.p0, 0.0};
  sk.chi = photon.k0 / (p.z * sk.beta3);
  return sk;
}

enum class RecoilRegime { General, Nonrelativistic, Ultrarelativistic };

// Small-recoil approximants for q3, the denominators q3 -+ k3 and q^2.
// Signs follow the exact convention (q3 < 0, denominators < 0).
struct RecoilApproximation {
  double q3 = 0.0;
  double denom_plus = 0.0;   // q3 - k3
  double denom_minus = 0.0;  // q3 + k3
  double q_sq = 0.0;

  double denom(int r) const { return r > 0 ? denom_plus : denom_minus; }
};

inline RecoilApproximation recoil_approximations(const ScatteringKinematics& sk,
                                                 RecoilRegime regime = RecoilRegime::General) {
  if (!(sk.chi < 1.0))
    throw RegimeViolationError("recoil_approximations: chi >= 1, quantum recoil not small");

  const double k0 = sk.photon.k0;
  const Vec3 n_perp{sk.photon.n.x, sk.photon.n.y, 0.0};
  const double bperp_nperp = dot(sk.beta_perp, n_perp);
  const double n3 = sk.photon.n3;
  RecoilApproximation out;
  switch (regime) {
    case RecoilRegime::General:
      out.q3 = k0 * (1.0 - bperp_nperp) / sk.beta3;
      out.denom_plus = k0 * (1.0 - bperp_nperp - sk.beta3 * n3) / sk.beta3;
      out.denom_minus = k0 * (1.0 - bperp_nperp + sk.beta3 * n3) / sk.beta3;
      out.q_sq = -k0 * k0 *
                 ((1.0 - bperp_nperp) * (1.0 - bperp_nperp) - sk.beta3 * sk.beta3 * n3 * n3) /
                 (sk.beta3 * sk.beta3);
      break;
    case RecoilRegime::Nonrelativistic:
      out.q3 = k0 / sk.beta3;
      out.denom_plus = k0 / sk.beta3;
      out.denom_minus = k0 / sk.beta3;
      out.q_sq = -k0 * k0 / (sk.beta3 * sk.beta3);
      break;
    case RecoilRegime::Ultrarelativistic: {
      const double g2 = sk.gamma * sk.gamma;
      const Vec3 d = sk.beta_perp - n_perp;
      const double corr = 1.0 + norm2(d) * g2;
      out.q3 = -k0;
      out.denom_plus = -2.0 * k0;
      out.denom_minus = -k0 * corr / (2.0 * g2);
      out.q_sq = -k0 * k0 * corr / g2;
      break;
    }
  }
  return out;
}

}  // namespace transrad
