// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

namespace transrad {

// Natural units (hbar = c = 1) with energies in eV throughout the library.
// Lengths are therefore measured in 1/eV; the CLI converts nm at the boundary.
namespace constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double alpha_fs = 7.2973525693e-3;   // fine structure constant
inline constexpr double hbar_c_ev_nm = 197.3269804;   // eV * nm
inline constexpr double hbar_ev_s = 6.582119569e-16;  // eV * s

inline constexpr double electron_mass_ev = 510998.95;
inline constexpr double proton_mass_ev = 938272088.16;
inline constexpr double neutron_mass_ev = 939565420.52;

// Neutron anomalous moment in nuclear magnetons, mu_N = e/(2 m_p).
inline constexpr double neutron_kappa = -1.91304273;

}  // namespace constants

// |e| such that e^2 = 4 pi alpha.
inline double unit_charge() {
  return std::sqrt(4.0 * constants::pi * constants::alpha_fs);
}

}  // namespace transrad
