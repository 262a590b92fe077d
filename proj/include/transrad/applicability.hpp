// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "transrad/kinematics.hpp"

namespace transrad {

// User-supplied experimental scales; everything in natural units (1/eV for
// lengths and times, eV for momenta). Absent fields skip their checks.
struct ApplicabilityContext {
  std::optional<double> plate_size_perp{};     // L_perp
  std::optional<double> interaction_time{};    // T = t2 - t1
  std::optional<double> layer_thickness{};     // transition layer delta
  std::optional<double> packet_p3_scale{};     // p3^phi
  std::optional<double> packet_pperp_scale{};  // p_perp^phi
};

// Advisory validity report; never blocks a computation.
struct ApplicabilityReport {
  double ell_z_min = 0.0;  // formation length, r = +1 term
  double ell_z_max = 0.0;  // r = -1 term; may be +inf at theta -> 0
  double chi = 0.0;
  bool recoil_small = false;     // chi < 0.1
  bool recoil_moderate = false;  // 0.1 <= chi < 1
  bool channel_open = true;
  // The sigma = +1 (mirror-image scattering) branch is dropped throughout;
  // valid when delta >> 1/(2|p3|), which holds for every supported regime.
  bool branch_sigma_plus_suppressed = true;

  std::optional<bool> time_long_enough{};      // T |beta3| >> ell_z
  std::optional<bool> time_resolves_packet{};  // T |beta3| p3^phi >= 1
  std::optional<bool> plate_wide_enough{};     // L_perp p_perp^phi >= 1
  std::optional<bool> boundary_sharp{};        // delta << ell_z

  // Packet angular-dispersion bound: the orthogonal-polarization recoil
  // contribution dominates only while Delta theta^2 is far below this.
  // Evaluated with the kinetic-energy recoil scale (k0/E_kin)^2, the
  // convention behind the quoted 1 keV / 1 eV -> 1e-6 example.
  double delta_theta_sq_bound = 0.0;

  std::vector<std::string> notes{};
};

inline ApplicabilityReport applicability(const ScatteringKinematics& sk,
                                         const ApplicabilityContext& ctx = {}) {
  ApplicabilityReport r;
  r.chi = sk.chi;
  r.recoil_small = sk.chi < 0.1;
  r.recoil_moderate = sk.chi >= 0.1 && sk.chi < 1.0;
  if (sk.chi >= 1.0) r.notes.push_back("quantum recoil not small: chi >= 1");

  const Vec3 n_perp{sk.photon.n.x, sk.photon.n.y, 0.0};
  const double bn = dot(sk.beta_perp, n_perp);
  const double ab3 = std::abs(sk.beta3);
  auto ell = [&](int rr) {
    const double den = sk.photon.k0 * (1.0 - bn + rr * sk.photon.n3);
    return den > 0.0 ? ab3 / den : std::numeric_limits<double>::infinity();
  };
  r.ell_z_min = ell(+1);
  r.ell_z_max = ell(-1);

  const double e_kin = sk.p0 - sk.mass;
  r.delta_theta_sq_bound = (sk.photon.k0 / e_kin) * (sk.photon.k0 / e_kin);

  if (ctx.interaction_time) {
    r.time_long_enough = *ctx.interaction_time * ab3 >= 10.0 * r.ell_z_max;
    if (ctx.packet_p3_scale)
      r.time_resolves_packet = *ctx.interaction_time * ab3 * *ctx.packet_p3_scale >= 1.0;
  }
  if (ctx.plate_size_perp && ctx.packet_pperp_scale)
    r.plate_wide_enough = *ctx.plate_size_perp * *ctx.packet_pperp_scale >= 1.0;
  if (ctx.layer_thickness)
    r.boundary_sharp = *ctx.layer_thickness <= 0.1 * r.ell_z_min;

  return r;
}

}  // namespace transrad
