// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "helpers.hpp"
#include "transrad/dirac.hpp"

using namespace transrad;

namespace {
double eta(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

long double max_abs(const Mat4c& m) { return m.max_abs(); }
}  // namespace

TEST_CASE("gamma matrices satisfy the defining relations", "[dirac]") {
  const GammaBasis& b = GammaBasis::standard();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat4c anti = anticommutator(b.gamma[mu], b.gamma[nu]);
      const Mat4c expect = b.unit * lcplx(2.0L * eta(mu, nu));
      CHECK(max_abs(anti - expect) < 1e-14);
    }
  // gamma5 = -i g0 g1 g2 g3: anticommutes with all gammas, squares to one
  CHECK(max_abs(b.gamma5 * b.gamma5 - b.unit) < 1e-14);
  for (int mu = 0; mu < 4; ++mu)
    CHECK(max_abs(anticommutator(b.gamma5, b.gamma[mu])) < 1e-14);
  CHECK(max_abs(anticommutator(b.gamma[1], b.gamma[2])) < 1e-14);
}

TEST_CASE("four-gamma trace identity", "[dirac]") {
  const GammaBasis& b = GammaBasis::standard();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sg = 0; sg < 4; ++sg) {
          const lcplx tr = (b.gamma[mu] * b.gamma[nu] * b.gamma[rho] * b.gamma[sg]).trace();
          const double expect = 4.0 * (eta(mu, nu) * eta(rho, sg) - eta(mu, rho) * eta(nu, sg) +
                                       eta(mu, sg) * eta(nu, rho));
          CHECK(std::abs(static_cast<double>(tr.real()) - expect) < 1e-13);
          CHECK(std::abs(static_cast<double>(tr.imag())) < 1e-13);
        }
}

TEST_CASE("rest-frame spinor", "[dirac]") {
  const Bispinor u = build_spinor(Vec3{}, +1, Vec3{0.0, 0.0, 1.0}, 1.0);
  CHECK(std::abs(u.c[0] - lcplx(1.0L)) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(u.c[i]) < 1e-15);
}

TEST_CASE("dirac equation, normalization and projectors", "[dirac][property]") {
  const GammaBasis& b = GammaBasis::standard();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 25; ++it) {
    const double m = 0.5 + std::abs(uni(rng)) * 2.0;
    const Vec3 p{3.0 * uni(rng), 3.0 * uni(rng), 3.0 * uni(rng)};
    Vec3 tau{uni(rng), uni(rng), uni(rng)};
    if (norm(tau) < 1e-3) tau = {0.0, 0.0, 1.0};
    tau = tau / norm(tau);
    const double p0 = std::sqrt(m * m + norm2(p));
    const Mat4c pslash = b.slash({p0, p});

    Mat4c sum_uubar;
    for (int s : {+1, -1}) {
      const Bispinor u = build_spinor(p, s, tau, m);
      // (pslash - m) u = 0
      const Mat4c d = pslash - b.unit * lcplx(m);
      long double resid = 0.0L, unorm = 0.0L;
      for (int i = 0; i < 4; ++i) {
        lcplx acc{};
        for (int j = 0; j < 4; ++j) acc += d(i, j) * u.c[j];
        resid += std::norm(acc);
        unorm += std::norm(u.c[i]);
      }
      CHECK(std::sqrt(static_cast<double>(resid / unorm)) < 1e-12);

      // ubar u = 1
      const auto ub = u.bar();
      lcplx ubar_u{};
      for (int i = 0; i < 4; ++i) ubar_u += ub[i] * u.c[i];
      CHECK(std::abs(static_cast<double>(ubar_u.real()) - 1.0) < 1e-13);

      sum_uubar = sum_uubar + outer(u);

      // u ubar = (m + pslash)(1 - g5 sslash) / (4m) with zeta = s tau
      const Mat4c proj = spin_projector(p, m, tau * static_cast<double>(s));
      CHECK(max_abs(outer(u) - proj) < 1e-12 * std::max<long double>(1.0L, proj.max_abs()));
    }
    // sum_s u ubar = (m + pslash) / (2m)
    const Mat4c expect = (b.unit * lcplx(m) + pslash) * lcplx(1.0L / (2.0L * m));
    CHECK(max_abs(sum_uubar - expect) < 1e-12 * expect.max_abs());

    // antiparticle: sum_s v vbar = -(m - pslash) / (2m), vbar v = -1
    Mat4c sum_vvbar;
    for (int s : {+1, -1}) {
      const Bispinor v = build_antispinor(p, s, tau, m);
      const auto vb = v.bar();
      lcplx vbar_v{};
      for (int i = 0; i < 4; ++i) vbar_v += vb[i] * v.c[i];
      CHECK(std::abs(static_cast<double>(vbar_v.real()) + 1.0) < 1e-13);
      sum_vvbar = sum_vvbar + outer(v);
    }
    const Mat4c expect_v = (b.unit * lcplx(m) - pslash) * lcplx(-1.0L / (2.0L * m));
    CHECK(max_abs(sum_vvbar - expect_v) < 1e-12 * expect_v.max_abs());
  }
}

TEST_CASE("spin four-vector is orthogonal to p with s^2 = -zeta^2", "[dirac][property]") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const double m = 0.5 + std::abs(uni(rng));
    const Vec3 p{2.0 * uni(rng), 2.0 * uni(rng), 2.0 * uni(rng)};
    Vec3 zeta{uni(rng), uni(rng), uni(rng)};
    if (norm(zeta) > 1.0) zeta = zeta / (1.0001 * norm(zeta));
    const FourVec s = SpinState{zeta}.s_mu(p, m);
    const double p0 = std::sqrt(m * m + norm2(p));
    CHECK(std::abs(mdot(s, FourVec{p0, p})) < 1e-12 * p0 * (1.0 + norm(zeta)));
    CHECK(mdot(s, s) == Catch::Approx(-norm2(zeta)).margin(1e-12));
  }
}

TEST_CASE("spin projector idempotent for pure states", "[dirac]") {
  const GammaBasis& b = GammaBasis::standard();
  const Vec3 p{0.4, -1.1, -2.0};
  const double m = 1.3;
  const Vec3 zeta = Vec3{0.6, 0.48, 0.64} / norm(Vec3{0.6, 0.48, 0.64});
  const FourVec s = SpinState{zeta}.s_mu(p, m);
  const Mat4c half = (b.unit - b.gamma5 * b.slash(s)) * lcplx(0.5L);
  CHECK(max_abs(half * half - half) < 1e-12);
}

TEST_CASE("gamma basis transforms unitarily", "[dirac]") {
  // A fixed unitary: exp of an antihermitian combination, built by squaring.
  const GammaBasis& b = GammaBasis::standard();
  Mat4c a;  // antihermitian
  const lcplx i1(0.0L, 1.0L);
  a = b.gamma[1] * b.gamma[2] * lcplx(0.3L) + b.gamma5 * i1 * lcplx(0.21L) +
      b.gamma[0] * i1 * lcplx(0.11L);
  a = (a - a.dagger()) * lcplx(0.5L);
  // exp(a) by scaling and squaring with a short Taylor series
  Mat4c x = a * lcplx(1.0L / 64.0L);
  Mat4c expx = Mat4c::identity();
  Mat4c term = Mat4c::identity();
  for (int k = 1; k <= 12; ++k) {
    term = term * x * lcplx(1.0L / k);
    expx = expx + term;
  }
  for (int k = 0; k < 6; ++k) expx = expx * expx;
  // unitarity check
  CHECK(max_abs(expx * expx.dagger() - Mat4c::identity()) < 1e-12);

  const GammaBasis bt = b.transformed(expx);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat4c anti = anticommutator(bt.gamma[mu], bt.gamma[nu]);
      CHECK(max_abs(anti - b.unit * lcplx(2.0L * eta(mu, nu))) < 1e-12);
    }
}
