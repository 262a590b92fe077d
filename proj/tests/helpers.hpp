// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "transrad/kinematics.hpp"

namespace transrad::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

struct RandomPoint {
  Vec3 p;
  PhotonKinematics photon;
  ScatteringKinematics sk;
  Vec3 zeta;
};

// Random open-channel kinematics with chi and gamma in the given ranges and
// |zeta| <= 1; resamples closed-channel draws.
inline RandomPoint sample_point(std::mt19937& rng, double chi_min = 1e-4, double chi_max = 0.5,
                                double gamma_min = 1.0005, double gamma_max = 50.0,
                                double mass = 1.0) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    const double gamma =
        gamma_min * std::pow(gamma_max / gamma_min, uni(rng));
    const double pmag = mass * std::sqrt(gamma * gamma - 1.0);
    const double cos_tp = -(0.05 + 0.95 * uni(rng));  // p3 decisively negative
    const double sin_tp = std::sqrt(1.0 - cos_tp * cos_tp);
    const double phi_p = 2.0 * constants::pi * uni(rng);
    const Vec3 p{pmag * sin_tp * std::cos(phi_p), pmag * sin_tp * std::sin(phi_p),
                 pmag * cos_tp};
    const double chi = chi_min * std::pow(chi_max / chi_min, uni(rng));
    const double p0 = mass * gamma;
    const double k0 = chi * p.z * (p.z / p0);
    const double theta = (0.02 + 0.94 * uni(rng)) * constants::pi / 2.0;
    const double phi = 2.0 * constants::pi * uni(rng);
    try {
      const PhotonKinematics photon = PhotonKinematics::from_angles(k0, theta, phi);
      RandomPoint pt{p, photon, solve_final_momentum(p, photon, mass), Vec3{}};
      double zx, zy, zz;
      do {
        zx = 2.0 * uni(rng) - 1.0;
        zy = 2.0 * uni(rng) - 1.0;
        zz = 2.0 * uni(rng) - 1.0;
      } while (zx * zx + zy * zy + zz * zz > 1.0);
      pt.zeta = {zx, zy, zz};
      return pt;
    } catch (const ChannelClosedError&) {
      continue;
    }
  }
}

}  // namespace transrad::testing
