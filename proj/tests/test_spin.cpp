// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "transrad/constants.hpp"
#include "transrad/spin.hpp"

using namespace transrad;

TEST_CASE("zeta0 at theta = 0 rotates in the xy plane", "[spin]") {
  for (double psi : {0.0, 0.7, 2.0, 5.5}) {
    const Vec3 z0 = zeta0_vector(0.0, 0.0, psi);
    CHECK(z0.x == Catch::Approx(std::cos(psi)).margin(1e-15));
    CHECK(z0.y == Catch::Approx(std::sin(psi)).margin(1e-15));
    CHECK(std::abs(z0.z) < 1e-15);
  }
  // kappa = 0 with tau = e3 reproduces zeta0
  const Vec3 z = effective_spin(Vec3{0.0, 0.0, 1.0}, 0.0, 1.3);
  CHECK(z.x == Catch::Approx(std::cos(1.3)).margin(1e-14));
  CHECK(z.y == Catch::Approx(std::sin(1.3)).margin(1e-14));
}

TEST_CASE("effective spin saturates to tau for large kappa", "[spin]") {
  const Vec3 tau = Vec3{1.0, 2.0, -0.5} / norm(Vec3{1.0, 2.0, -0.5});
  const Vec3 z = effective_spin(tau, 20.0, 0.9);
  CHECK(norm(z - tau) < 1e-8);
}

TEST_CASE("zeta0 properties and precession ODE", "[spin][property]") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    const double theta = uni(rng) * constants::pi;
    const double phi = uni(rng) * 2.0 * constants::pi;
    const double psi = uni(rng) * 2.0 * constants::pi;
    const Vec3 tau{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                   std::cos(theta)};
    const Vec3 z0 = zeta0_vector(theta, phi, psi);
    CHECK(norm(z0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(dot(z0, tau)) < 1e-13);

    // d zeta0 / d psi = tau x zeta0 by central difference
    const double h = 1e-5;
    const Vec3 plus = zeta0_vector(theta, phi, psi + h);
    const Vec3 minus = zeta0_vector(theta, phi, psi - h);
    const Vec3 fd = (plus - minus) / (2.0 * h);
    const Vec3 expect = cross(tau, z0);
    CHECK(norm(fd - expect) < 1e-8);

    // |zeta| = 1 for any kappa
    const double kappa = 4.0 * (uni(rng) - 0.5);
    CHECK(norm(effective_spin(tau, kappa, psi)) == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("superposition density matrix matches the effective spin", "[spin][property]") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    const double theta = uni(rng) * constants::pi;
    const double phi = uni(rng) * 2.0 * constants::pi;
    const double psi = uni(rng) * 2.0 * constants::pi;
    const double kappa = 3.0 * (uni(rng) - 0.5);
    const Vec3 tau{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                   std::cos(theta)};
    const SpinDensityMatrix rho = SpinDensityMatrix::from_superposition(tau, kappa, psi);
    CHECK(rho.trace_real() == Catch::Approx(1.0).epsilon(1e-13));
    // hermitian
    CHECK(std::abs(rho(0, 1) - std::conj(rho(1, 0))) < 1e-14);

    const Vec3 z_rho = rho.zeta();
    const Vec3 z_eff = effective_spin(tau, kappa, psi);
    CHECK(norm(z_rho - z_eff) < 1e-12);

    // reconstruction: zeta -> rho -> zeta is the identity
    const SpinDensityMatrix rebuilt = SpinDensityMatrix::from_zeta(z_rho);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(rebuilt(i, j) - rho(i, j)) < 1e-14);
  }
}
