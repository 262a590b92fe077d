// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "transrad/errors.hpp"
#include "transrad/kinematics.hpp"
#include "transrad/packets.hpp"
#include "transrad/radiation.hpp"

namespace transrad {

// Classical (exclusive) radiation amplitude of a narrow packet: the charge
// vertex with p' -> p, exact centroid kinematics, the Gaussian recoil
// overlap of the packet with its kicked self, and the translation phase
// exp(-i k_tilde . b). |value|^2 is the probability density of the process
// where the escaping particle is measured in its freely evolved state.
struct ClassicalAmplitude {
  cplx value{};     // |value|^2 = dP_exclusive / d^3k
  double overlap = 1.0;  // recoil-overlap factor (amplitude level)
  Vec3 k_tilde{};   // (k_perp, q3): momentum handed to the field
};

inline ClassicalAmplitude classical_amplitude(const WavePacket& packet,
                                              const PhotonKinematics& photon,
                                              const PolarizationBasis& pol,
                                              const ParticleParams& pp) {
  const Vec3 pbar = packet.mean_momentum();
  const Mat3 cov = packet.momentum_covariance();
  const double pmag = norm(pbar);
  for (int i = 0; i < 3; ++i)
    if (std::sqrt(cov(i, i)) / pmag >= 0.05)
      throw RegimeViolationError(
          "classical_amplitude: packet too wide for the point-current approximation");

  const ScatteringKinematics sk = solve_final_momentum(pbar, photon, pp.mass);

  ClassicalAmplitude amp;
  amp.k_tilde = sk.q;  // transverse photon momentum and longitudinal transfer

  // Charge current only; the p' -> p vertex contracted with
  // F = -(2/q^2)[k3 f + (q3 - k3) e3 f3].
  const double f3 = pol.f.z.real();
  const cplx a_lin =
      photon.k3 * dot(pbar, pol.f) + (sk.q3 - photon.k3) * pbar.z * f3;
  const cplx p_dot_f = cplx(-2.0 / sk.q_sq) * a_lin;
  const double pref =
      1.0 / std::sqrt(16.0 * std::pow(constants::pi, 3) * photon.k0 *
                      std::abs(sk.p_prime.z * pbar.z));

  amp.overlap = std::exp(-0.125 * quad_form(inverse(cov), amp.k_tilde));

  cplx translation(1.0);
  if (const GaussianSuperposition* g = packet.as_gaussian()) {
    double wsum = 0.0;
    cplx acc{};
    for (std::size_t l = 0; l < g->centers.size(); ++l) {
      const double wl = std::norm(g->weights[l]);
      wsum += wl;
      acc += wl * std::polar(1.0, -dot(amp.k_tilde, g->centers[l]));
    }
    translation = acc / wsum;
  }

  amp.value = pp.charge * p_dot_f * pref * amp.overlap * translation;
  return amp;
}

struct ExchangeTermInfo {
  bool neglected = true;
  double max_pairwise_overlap = 0.0;
};

// Inclusive N-particle decomposition: incoherent quantum radiation per
// packet, plus the coherent classical term with the per-packet incoherent
// classical part subtracted. The exchange term is neglected under the
// separation precondition.
struct NParticleResult {
  double incoherent_quantum = 0.0;
  double coherent_classical = 0.0;
  double incoherent_classical_subtraction = 0.0;
  double total = 0.0;
  ExchangeTermInfo exchange{};
  std::vector<std::string> warnings{};
};

struct NParticleInput {
  WavePacket packet;
  Vec3 center{};  // coordinate displacement b_k, units 1/eV
};

inline NParticleResult n_particle_probability(const std::vector<NParticleInput>& inputs,
                                              const PhotonKinematics& photon,
                                              const PolarizationBasis& pol,
                                              const ParticleParams& pp,
                                              const QuadratureOptions& opt = {}) {
  if (inputs.empty()) throw std::invalid_argument("n_particle_probability: empty input");

  NParticleResult res;
  // Separation precondition: pairwise coordinate overlaps must be small.
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i + 1; j < inputs.size(); ++j) {
      const Mat3 cov = inputs[i].packet.momentum_covariance();
      const Vec3 d = inputs[i].center - inputs[j].center;
      const double ov = std::exp(-0.5 * quad_form(cov, d));
      res.exchange.max_pairwise_overlap = std::max(res.exchange.max_pairwise_overlap, ov);
    }
  if (res.exchange.max_pairwise_overlap >= 1e-3)
    throw OverlapViolationError("n_particle_probability: pairwise packet overlap " +
                                std::to_string(res.exchange.max_pairwise_overlap) +
                                " >= 1e-3; packets are not separated");

  // Fixed summation order for reproducibility.
  cplx coherent_sum{};
  for (const NParticleInput& in : inputs) {
    const RadiationResult rq = probability(in.packet, photon, pol, pp, opt);
    res.incoherent_quantum += rq.value;
    for (const auto& w : rq.warnings) res.warnings.push_back(w);
    const ClassicalAmplitude a = classical_amplitude(in.packet, photon, pol, pp);
    const cplx ak = a.value * std::polar(1.0, -dot(a.k_tilde, in.center));
    coherent_sum += ak;
    res.incoherent_classical_subtraction += std::norm(ak);
  }
  res.coherent_classical = std::norm(coherent_sum);
  res.total =
      res.incoherent_quantum + res.coherent_classical - res.incoherent_classical_subtraction;
  return res;
}

// Exclusive (classical) vs inclusive probability at one photon point; the
// inequality exclusive <= inclusive holds within the combined tolerance of
// the point-current approximation.
struct ExclusiveInclusiveReport {
  double exclusive = 0.0;
  double inclusive = 0.0;
  double ratio = 0.0;
  bool inequality_ok = false;
  double tolerance = 0.0;
  std::vector<std::string> notes{};
};

inline ExclusiveInclusiveReport exclusive_vs_inclusive_report(const WavePacket& packet,
                                                              const PhotonKinematics& photon,
                                                              const PolarizationBasis& pol,
                                                              const ParticleParams& pp,
                                                              const QuadratureOptions& opt = {}) {
  ExclusiveInclusiveReport rep;
  const ClassicalAmplitude a = classical_amplitude(packet, photon, pol, pp);
  rep.exclusive = std::norm(a.value);
  const RadiationResult incl = probability(packet, photon, pol, pp, opt);
  rep.inclusive = incl.value;
  rep.ratio = rep.exclusive / (rep.inclusive + 1e-300);

  const ScatteringKinematics sk = solve_final_momentum(packet.mean_momentum(), photon, pp.mass);
  const double kick = quad_form(inverse(packet.momentum_covariance()), a.k_tilde);
  rep.tolerance = 2.0 * sk.chi + 2.0 * kick + opt.rtol;
  rep.inequality_ok = rep.exclusive <= rep.inclusive * (1.0 + rep.tolerance);

  if (const TwistedPacket* t = packet.as_twisted(); t && t->l != 0)
    rep.notes.push_back(
        "twisted packet: the inclusive probability is independent of the vortex phase, while "
        "the classical current of the same packet carries an orbital magnetic moment; the "
        "exclusive quantity is not an approximation to the inclusive one here");
  return rep;
}

}  // namespace transrad
