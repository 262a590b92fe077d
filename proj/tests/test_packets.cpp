// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "helpers.hpp"
#include "transrad/packets.hpp"

using namespace transrad;
using transrad::testing::rel_diff;

namespace {

// Independent normalization oracle: brute-force box quadrature of the
// density on a Gauss-Legendre grid (no packet-aligned shortcuts).
std::pair<std::vector<double>, std::vector<double>> legendre_rule(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double t1 = t - p0 / dp;
      const bool done = std::abs(t1 - t) < 1e-15;
      t = t1;
      if (done) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

double box_integral(const WavePacket& packet, const Vec3& center, const Vec3& halfwidth, int n) {
  const auto [x, w] = legendre_rule(n);
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec3 p{center.x + halfwidth.x * x[a], center.y + halfwidth.y * x[b],
                     center.z + halfwidth.z * x[c]};
        sum += w[a] * w[b] * w[c] * packet.density(p);
      }
  return sum * halfwidth.x * halfwidth.y * halfwidth.z;
}

}  // namespace

TEST_CASE("single gaussian peak value", "[packets]") {
  const Mat3 cov = Mat3::diag(0.01, 0.02, 0.04);
  const Vec3 mean{0.0, 0.0, -5.0};
  const GaussianSuperposition g = GaussianSuperposition::make(mean, cov);
  const double expect = std::pow(2.0 * constants::pi, -1.5) / std::sqrt(det(cov));
  CHECK(rel_diff(g.density(mean), expect) < 1e-13);
}

TEST_CASE("twisted l = 0 collapses to a cylindrical gaussian", "[packets]") {
  const double p = -4.0, s3 = 0.02, sp = 0.05;
  const TwistedPacket t = TwistedPacket::make(p, s3, sp, 0, +1);
  const GaussianSuperposition g =
      GaussianSuperposition::make(Vec3{0.0, 0.0, p}, Mat3::diag(sp * sp, sp * sp, s3 * s3));
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const Vec3 q{0.2 * uni(rng), 0.2 * uni(rng), p + 0.08 * uni(rng)};
    CHECK(rel_diff(t.density(q), g.density(q)) < 1e-12);
  }
}

TEST_CASE("two-hump superposition: cosine modulation and unit mass", "[packets]") {
  const double d = 60.0;  // separation in 1/eV
  const GaussianSuperposition g = GaussianSuperposition::make(
      Vec3{0.0, 0.0, -3.0}, Mat3::diag(0.01, 0.01, 0.01),
      {Vec3{0.0, 0.0, 0.0}, Vec3{0.0, 0.0, d}},
      {cplx(1.0 / std::numbers::sqrt2), cplx(1.0 / std::numbers::sqrt2)});
  // modulation: S(p) = 1 + cos(p3 d)
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const double p3 = -3.0 + 0.3 * uni(rng);
    const Vec3 p{0.05 * uni(rng), 0.05 * uni(rng), p3};
    CHECK(rel_diff(g.structure_factor(p), 1.0 + std::cos(p3 * d)) < 1e-12);
  }
  const WavePacket packet(g);
  const double mass = box_integral(packet, Vec3{0.0, 0.0, -3.0}, Vec3{0.9, 0.9, 0.9}, 96);
  CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("twisted packet mass and transverse spread", "[packets]") {
  const double p = -8.0, s3 = 0.05, sp = 0.12;
  for (int l : {0, 1, 4}) {
    const WavePacket packet(TwistedPacket::make(p, s3, sp, l));
    const double hw_perp = 8.0 * sp * std::sqrt(std::abs(l) + 1.0);  // 8 per-axis sigmas
    const double mass =
        box_integral(packet, Vec3{0.0, 0.0, p}, Vec3{hw_perp, hw_perp, 8.0 * s3}, 96);
    CHECK(std::abs(mass - 1.0) < 1e-6);

    // <p_perp_x^2> = (|l|+1) sigma_perp^2 against the aligned rule
    double m2 = 0.0;
    for (const QuadNode& node : packet.quadrature(3)) m2 += node.w * node.p.x * node.p.x;
    CHECK(rel_diff(m2, (std::abs(l) + 1.0) * sp * sp) < 1e-10);
  }
}

TEST_CASE("aligned quadrature reproduces the unit mass", "[packets]") {
  const GaussianSuperposition g = GaussianSuperposition::make(
      Vec3{0.1, -0.2, -6.0}, Mat3::diag(0.04, 0.01, 0.02),
      {Vec3{0.0, 0.0, 0.0}, Vec3{15.0, 0.0, 10.0}}, {cplx(0.8), cplx(0.0, -0.6)});
  const WavePacket packet(g);
  double mass = 0.0;
  for (const QuadNode& node : packet.quadrature(3)) mass += node.w;
  CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("structure factor basics", "[packets]") {
  SECTION("single term is constant") {
    const GaussianSuperposition g = GaussianSuperposition::make(
        Vec3{0.0, 0.0, -2.0}, Mat3::diag(0.01, 0.01, 0.01), {Vec3{1.0, 2.0, 3.0}},
        {cplx(0.3, 0.4)});
    CHECK(rel_diff(g.structure_factor(Vec3{0.5, -0.5, -2.0}), 0.25) < 1e-13);
  }
  SECTION("four-center lattice peaks at reciprocal points with height N^2 |k|^2") {
    const double d = 40.0;
    std::vector<Vec3> centers;
    std::vector<cplx> weights;
    for (int l = 0; l < 4; ++l) {
      centers.push_back(Vec3{0.0, 0.0, l * d});
      weights.push_back(cplx(0.5));
    }
    const GaussianSuperposition g = GaussianSuperposition::make(
        Vec3{0.0, 0.0, -3.0}, Mat3::diag(0.02, 0.02, 0.02), centers, weights);
    REQUIRE(g.lattice_spacing().has_value());
    CHECK(rel_diff(g.lattice_spacing()->z, d) < 1e-12);
    const double peak = 2.0 * constants::pi / d;
    for (int n : {-2, -1, 0, 1, 2})
      CHECK(rel_diff(g.structure_factor(Vec3{0.0, 0.0, n * peak}), 16.0 * 0.25) < 1e-10);
    CHECK(g.structure_factor(Vec3{0.0, 0.0, 0.41 * peak}) < 16.0 * 0.25);
  }
  SECTION("positivity for random phases") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Vec3> centers;
    std::vector<cplx> weights;
    for (int l = 0; l < 5; ++l) {
      centers.push_back(Vec3{10.0 * uni(rng), 10.0 * uni(rng), 10.0 * uni(rng)});
      weights.push_back(std::polar(0.2 + std::abs(uni(rng)), constants::pi * uni(rng)));
    }
    const GaussianSuperposition g = GaussianSuperposition::make(
        Vec3{0.0, 0.0, -2.0}, Mat3::diag(0.01, 0.01, 0.01), centers, weights);
    for (int it = 0; it < 10000; ++it) {
      const Vec3 p{3.0 * uni(rng), 3.0 * uni(rng), 3.0 * uni(rng)};
      CHECK(g.structure_factor(p) >= 0.0);
    }
  }
}

TEST_CASE("effective spin field", "[packets]") {
  SECTION("kappa = 0 with tau = e3 rotates in the xy plane as p.b varies") {
    SpinSuperposition s;
    s.envelope = GaussianSuperposition::make(Vec3{0.0, 0.0, -5.0}, Mat3::diag(0.01, 0.01, 0.01));
    s.tau = {0.0, 0.0, 1.0};
    s.kappa = 0.0;
    s.b_spin = {0.0, 0.0, 2.0};
    s.vartheta = 0.0;
    const WavePacket packet(s);
    for (double p3 : {-5.0, -5.2, -4.7}) {
      const Vec3 z = packet.zeta(Vec3{0.0, 0.0, p3});
      const double psi = p3 * 2.0;
      CHECK(rel_diff(z.x, std::cos(psi)) < 1e-12);
      CHECK(rel_diff(z.y, std::sin(psi)) < 1e-12);
      CHECK(std::abs(z.z) < 1e-14);
    }
  }
  SECTION("natural twisted polarization has zero effective spin") {
    const WavePacket packet(TwistedPacket::make(-3.0, 0.05, 0.05, 2, 0));
    CHECK(norm(packet.zeta(Vec3{0.1, 0.0, -3.0})) == 0.0);
  }
  SECTION("pure spin superposition stays on the unit sphere") {
    SpinSuperposition s;
    s.envelope = GaussianSuperposition::make(Vec3{0.0, 0.0, -5.0}, Mat3::diag(0.01, 0.01, 0.01));
    s.tau = Vec3{1.0, 1.0, 1.0} / norm(Vec3{1.0, 1.0, 1.0});
    s.kappa = 2.0;
    s.b_spin = {0.3, 0.0, 1.0};
    s.vartheta = 0.7;
    const WavePacket packet(s);
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int it = 0; it < 20; ++it) {
      const Vec3 p{0.2 * uni(rng), 0.2 * uni(rng), -5.0 + 0.2 * uni(rng)};
      CHECK(norm(packet.zeta(p)) == Catch::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("support and width diagnostics", "[packets]") {
  SECTION("packet leaking past p3 = 0 is rejected") {
    CHECK_THROWS_AS(WavePacket(GaussianSuperposition::make(Vec3{0.0, 0.0, -0.05},
                                                           Mat3::diag(1e-4, 1e-4, 1e-4))),
                    ConfigError);
  }
  SECTION("marginal twisted longitudinal spread warns") {
    const WavePacket p(TwistedPacket::make(-1.0, 0.12, 0.01, 1));
    REQUIRE(!p.warnings().empty());
    const WavePacket q(TwistedPacket::make(-1.0, 0.05, 0.01, 1));
    CHECK(q.warnings().empty());
  }
  SECTION("paraxiality diagnostics") {
    const TwistedPacket t = TwistedPacket::make(-2.0, 0.02, 0.1, 3);
    CHECK(rel_diff(t.paraxiality(1.0), 4.0 * 0.01) < 1e-14);
    CHECK(rel_diff(t.longitudinal_spread_ratio(), 0.01) < 1e-14);
  }
}

TEST_CASE("phase witness leaves density and spin bit-identical", "[packets]") {
  const WavePacket packet(TwistedPacket::make(-6.0, 0.05, 0.08, 5, +1));
  const WavePacket witness = packet.phase_invariance_witness(7);
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const Vec3 p{0.5 * uni(rng), 0.5 * uni(rng), -6.0 + 0.3 * uni(rng)};
    CHECK(packet.density(p) == witness.density(p));
    CHECK(norm(packet.zeta(p) - witness.zeta(p)) == 0.0);
  }
  // the vortex phase itself is such a phase: identical density by symmetry
  const Vec3 a{0.3, 0.0, -6.0}, b{0.0, 0.3, -6.0};  // same p_perp, different azimuth
  CHECK(packet.density(a) == Catch::Approx(packet.density(b)).epsilon(1e-14));
}
