// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "transrad/dirac.hpp"
#include "transrad/linalg.hpp"

namespace transrad {

// 2x2 Hermitian spin density matrix rho = (1 + sigma.zeta)/2, tr rho = 1.
struct SpinDensityMatrix {
  std::array<cplx, 4> m{};  // row major

  cplx& operator()(int i, int j) { return m[2 * i + j]; }
  cplx operator()(int i, int j) const { return m[2 * i + j]; }

  static SpinDensityMatrix from_zeta(const Vec3& zeta) {
    if (norm(zeta) > 1.0 + 1e-12)
      throw std::invalid_argument("SpinDensityMatrix: |zeta| must not exceed 1");
    SpinDensityMatrix r;
    r(0, 0) = 0.5 * (1.0 + zeta.z);
    r(1, 1) = 0.5 * (1.0 - zeta.z);
    r(0, 1) = 0.5 * cplx(zeta.x, -zeta.y);
    r(1, 0) = 0.5 * cplx(zeta.x, zeta.y);
    return r;
  }

  // General pure state phi_s = phi_0 e^{s (kappa - i psi)/2} / sqrt(2 cosh kappa)
  // with quantization axis tau: rho_{s sbar} = e^{kappa(s+sbar)/2 - i psi(s-sbar)/2}
  // / (2 cosh kappa) dressed with the chi_s basis spinors.
  static SpinDensityMatrix from_superposition(const Vec3& tau, double kappa, double psi) {
    const double ch = std::cosh(kappa);
    const std::array<cplx, 2> chi_p = pauli_eigenvector(tau, +1);
    const std::array<cplx, 2> chi_m = pauli_eigenvector(tau, -1);
    auto chi = [&](int s, int a) { return s > 0 ? chi_p[a] : chi_m[a]; };
    SpinDensityMatrix r;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        cplx acc{};
        for (int s : {+1, -1})
          for (int sb : {+1, -1}) {
            const double re = std::exp(kappa * (s + sb) / 2.0) / (2.0 * ch);
            const cplx phase = std::polar(1.0, -psi * (s - sb) / 2.0);
            acc += re * phase * chi(s, a) * std::conj(chi(sb, b));
          }
        r(a, b) = acc;
      }
    return r;
  }

  double trace_real() const { return (m[0] + m[3]).real(); }

  // zeta_i = tr(rho sigma_i); exact extraction.
  Vec3 zeta() const {
    const cplx z01 = m[1], z10 = m[2];
    return {(z01 + z10).real(), ((z10 - z01) * cplx(0.0, 1.0)).real() * -1.0,
            (m[0] - m[3]).real()};
  }
};

// zeta_0(theta, phi, psi) of the spin-superposition state; theta/phi are the
// polar angles of tau. Satisfies zeta_0^2 = 1, zeta_0.tau = 0 and
// d zeta_0 / d psi = tau x zeta_0.
inline Vec3 zeta0_vector(double theta_tau, double phi_tau, double psi) {
  const double ct = std::cos(theta_tau), st = std::sin(theta_tau);
  const double cp = std::cos(phi_tau), sp = std::sin(phi_tau);
  const double cd = std::cos(psi - phi_tau), sd = std::sin(psi - phi_tau);
  return {ct * cp * cd - sp * sd, ct * sp * cd + cp * sd, -st * cd};
}

// Effective spin vector zeta = tau tanh(kappa) + zeta_0 / cosh(kappa); unit
// length for every (kappa, psi).
inline Vec3 effective_spin(const Vec3& tau, double kappa, double psi) {
  if (!std::isfinite(kappa) || !std::isfinite(psi))
    throw std::invalid_argument("effective_spin: kappa and psi must be finite");
  const double tn = norm(tau);
  if (std::abs(tn - 1.0) > 1e-10) throw std::invalid_argument("effective_spin: |tau| must be 1");
  const double theta_tau = std::acos(std::clamp(tau.z / tn, -1.0, 1.0));
  const double phi_tau = (tau.x == 0.0 && tau.y == 0.0) ? 0.0 : std::atan2(tau.y, tau.x);
  const Vec3 z0 = zeta0_vector(theta_tau, phi_tau, psi);
  return tau * std::tanh(kappa) + z0 / std::cosh(kappa);
}

}  // namespace transrad
