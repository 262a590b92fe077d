// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>
#include <vector>

#include "transrad/classical.hpp"
#include "transrad/oracle.hpp"
#include "transrad/packets.hpp"
#include "transrad/radiation.hpp"
#include "transrad/spin.hpp"

namespace transrad {

enum class VerifyLevel { Quick, Full };

struct SuiteResult {
  std::string name;
  double worst = 0.0;  // worst relative error observed
  double tol = 0.0;
  bool pass = false;
  std::string detail;
};

namespace detail_verify {

inline double vrel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Random open-channel kinematics; mirrors the acceptance sampling ranges.
struct SampledPoint {
  Vec3 p;
  PhotonKinematics photon;
  ScatteringKinematics sk;
  Vec3 zeta;
};

inline SampledPoint sample(std::mt19937& rng, double mass = 1.0) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    const double gamma = 1.0005 * std::pow(50.0 / 1.0005, uni(rng));
    const double pmag = mass * std::sqrt(gamma * gamma - 1.0);
    const double ct = -(0.05 + 0.95 * uni(rng));
    const double st = std::sqrt(1.0 - ct * ct);
    const double phip = 2.0 * constants::pi * uni(rng);
    const Vec3 p{pmag * st * std::cos(phip), pmag * st * std::sin(phip), pmag * ct};
    const double chi = 1e-4 * std::pow(0.5 / 1e-4, uni(rng));
    const double k0 = chi * p.z * p.z / (mass * gamma);
    const double theta = (0.02 + 0.94 * uni(rng)) * constants::pi / 2.0;
    try {
      const PhotonKinematics photon =
          PhotonKinematics::from_angles(k0, theta, 2.0 * constants::pi * uni(rng));
      SampledPoint pt{p, photon, solve_final_momentum(p, photon, mass), Vec3{}};
      double x, y, z;
      do {
        x = 2.0 * uni(rng) - 1.0;
        y = 2.0 * uni(rng) - 1.0;
        z = 2.0 * uni(rng) - 1.0;
      } while (x * x + y * y + z * z > 1.0);
      pt.zeta = {x, y, z};
      return pt;
    } catch (const ChannelClosedError&) {
    }
  }
}

}  // namespace detail_verify

// Pairwise agreement of the traced integrand, the contraction fast path and
// the explicit spinor brute force over randomized kinematics.
inline SuiteResult verify_oracle_equivalence(VerifyLevel level) {
  using detail_verify::vrel;
  SuiteResult res{"oracle-equivalence", 0.0, 1e-10, false, ""};
  const int n = level == VerifyLevel::Quick ? 150 : 1000;
  std::mt19937 rng(12345);
  const ParticleParams pp = ParticleParams::charged(1.0, -unit_charge(), 0.5);
  for (int it = 0; it < n; ++it) {
    const auto pt = detail_verify::sample(rng);
    for (auto mode : {PolarizationMode::HelicityPlus, PolarizationMode::HelicityMinus,
                      PolarizationMode::LinearInPlane, PolarizationMode::LinearOrthogonal}) {
      const auto pol = build_polarization(pt.photon, mode);
      const double g = integrand_general(pt.sk, pol, pp, pt.zeta).total();
      const double c = integrand_contracted(pt.sk, pol, pp, pt.zeta).total();
      const double o = brute_force_density(pt.sk, pp, pt.zeta, pol);
      res.worst = std::max({res.worst, vrel(g, c), vrel(g, o), vrel(c, o)});
    }
  }
  res.detail = std::to_string(n) + " random kinematic points x 4 polarizations";
  res.pass = res.worst < res.tol;
  return res;
}

// Quadrature results against the normal-incidence closed forms on a
// width-halving ladder.
inline SuiteResult verify_closed_form_convergence(VerifyLevel level) {
  using detail_verify::vrel;
  SuiteResult res{"closed-form-convergence", 0.0, 1e-3, false, ""};
  const ParticleParams pp = ParticleParams::electron();
  const double m = pp.mass;
  const double gamma = 1.3;
  const double pmag = m * std::sqrt(gamma * gamma - 1.0);
  const double k0 = 1e-3 * pmag * pmag / (m * gamma);
  const auto photon = PhotonKinematics::from_angles(k0, 0.4, 0.0);
  ClosedFormArgs args{pp, photon, -pmag, 0.0, 0};
  const double cf_o = closed_form(ClosedFormName::OrthoPolNormal, args).value;
  const double cf_s = closed_form(ClosedFormName::SummedPolSmallRecoil, args).value;

  const std::vector<double> ladder =
      level == VerifyLevel::Quick ? std::vector<double>{2.5e-3} : std::vector<double>{1e-2, 5e-3, 2.5e-3};
  for (double s3rel : ladder) {
    const double s3 = s3rel * pmag, sp = 1e-7 * pmag;
    const WavePacket packet(
        GaussianSuperposition::make(Vec3{0.0, 0.0, -pmag}, Mat3::diag(sp * sp, sp * sp, s3 * s3)));
    QuadratureOptions opt;
    opt.rtol = 1e-8;
    const double q_o =
        probability(packet, photon, build_polarization(photon, PolarizationMode::LinearOrthogonal),
                    pp, opt)
            .value;
    const double q_s = probability_polarization_summed(packet, photon, pp, opt).value;
    if (s3rel == ladder.back()) res.worst = std::max({vrel(q_o, cf_o), vrel(q_s, cf_s)});
  }
  res.detail = "gaussian ladder vs orthogonal-polarization and summed closed forms at chi = 1e-3";
  res.pass = res.worst < res.tol;
  return res;
}

// Structural invariants: phase witness, spin decoupling, summed-probability
// spin independence, positivity, packet mass, effective-spin geometry.
// worst reports max(error / check tolerance); pass requires < 1.
inline SuiteResult verify_invariants(VerifyLevel level) {
  using detail_verify::vrel;
  SuiteResult res{"invariants", 0.0, 1.0, false, ""};
  auto record = [&](double err, double tol) { res.worst = std::max(res.worst, err / tol); };
  const int n = level == VerifyLevel::Quick ? 30 : 200;
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const ParticleParams pp = ParticleParams::charged(1.0, unit_charge(), 0.4);

  // spin decoupling + positivity on random points
  for (int it = 0; it < n; ++it) {
    const auto pt = detail_verify::sample(rng);
    for (auto mode : {PolarizationMode::LinearInPlane, PolarizationMode::LinearOrthogonal}) {
      const auto pol = build_polarization(pt.photon, mode);
      const double a = integrand_general(pt.sk, pol, pp, pt.zeta).total();
      const double b = integrand_general(pt.sk, pol, pp, pt.zeta * -1.0).total();
      record(vrel(a, b), 1e-12);
      record(a < 0.0 ? 1.0 : 0.0, 1.0);
    }
    // helicity-pair sum is basis independent and spin independent
    const double hp =
        integrand_general(pt.sk, build_polarization(pt.photon, PolarizationMode::HelicityPlus),
                          pp, pt.zeta)
            .total() +
        integrand_general(pt.sk, build_polarization(pt.photon, PolarizationMode::HelicityMinus),
                          pp, pt.zeta)
            .total();
    const double lin =
        integrand_general(pt.sk, build_polarization(pt.photon, PolarizationMode::LinearInPlane),
                          pp, Vec3{})
            .total() +
        integrand_general(pt.sk,
                          build_polarization(pt.photon, PolarizationMode::LinearOrthogonal), pp,
                          Vec3{})
            .total();
    record(vrel(hp, lin), 1e-11);
    // polarization completeness
    double f3sq = 0.0;
    for (auto mode : {PolarizationMode::HelicityPlus, PolarizationMode::HelicityMinus})
      f3sq += std::norm(build_polarization(pt.photon, mode).f.z);
    record(std::abs(f3sq - pt.photon.n_perp * pt.photon.n_perp), 1e-13);
    // q^2 dual route and denominator signs
    record(vrel(pt.sk.q_sq, pt.sk.q_sq_from_four_product()), 1e-12);
    record(pt.sk.denominator(+1) >= 0.0 || pt.sk.denominator(-1) >= 0.0 ? 1.0 : 0.0, 1.0);
  }

  // phase-invariance witness: bit-identical probabilities
  {
    const WavePacket packet(TwistedPacket::make(-3.0, 0.02, 0.03, 3, +1));
    const WavePacket witness = packet.phase_invariance_witness(99);
    const auto photon = PhotonKinematics::from_angles(2e-3, 0.7, 0.4);
    const auto pol = build_polarization(photon, PolarizationMode::HelicityMinus);
    const double a = probability(packet, photon, pol, pp).value;
    const double b = probability(witness, photon, pol, pp).value;
    record(a == b ? 0.0 : 1.0, 1.0);

    // packet mass from the aligned rule
    double mass_sum = 0.0;
    for (const QuadNode& node : packet.quadrature(3)) mass_sum += node.w;
    record(std::abs(mass_sum - 1.0), 1e-6);
  }

  // effective-spin geometry
  for (int it = 0; it < n; ++it) {
    const double theta = uni(rng) * constants::pi;
    const double phi = uni(rng) * 2.0 * constants::pi;
    const double psi = uni(rng) * 2.0 * constants::pi;
    const double kappa = 3.0 * (uni(rng) - 0.5);
    const Vec3 tau{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                   std::cos(theta)};
    const Vec3 z0 = zeta0_vector(theta, phi, psi);
    record(std::abs(norm(z0) - 1.0), 1e-12);
    record(std::abs(dot(z0, tau)), 1e-12);
    record(std::abs(norm(effective_spin(tau, kappa, psi)) - 1.0), 1e-12);
    const double h = 1e-5;
    const Vec3 fd =
        (zeta0_vector(theta, phi, psi + h) - zeta0_vector(theta, phi, psi - h)) / (2.0 * h);
    record(norm(fd - cross(tau, z0)), 1e-8);
  }

  res.detail =
      "phase witness, spin decoupling, positivity, packet mass, spin geometry (worst is "
      "error/tolerance)";
  res.pass = res.worst < res.tol;
  return res;
}

inline std::vector<SuiteResult> run_verification(VerifyLevel level) {
  return {verify_oracle_equivalence(level), verify_closed_form_convergence(level),
          verify_invariants(level)};
}

}  // namespace transrad
