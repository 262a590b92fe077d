// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "transrad/constants.hpp"
#include "transrad/errors.hpp"
#include "transrad/linalg.hpp"
#include "transrad/quadrature.hpp"
#include "transrad/spin.hpp"

namespace transrad {

struct QuadNode {
  Vec3 p;
  double w;  // includes the density weight; sum over nodes integrates c(p)
};

inline double gaussian_tail(double t) {  // P(X > t) for standard normal
  return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

// Coherent superposition of N Gaussians sharing one momentum-space envelope,
// displaced in coordinate space by the centers b_l with complex weights k_l.
struct GaussianSuperposition {
  Vec3 mean{};                  // mean momentum p_0, mean.z < 0
  Mat3 precision{};             // g^{ij}: c ~ exp(-(p-p0)^T g (p-p0) / 2) S(p)
  Mat3 covariance{};            // inverse of precision
  std::vector<Vec3> centers{};  // b_l, units 1/eV
  std::vector<cplx> weights{};  // k_l
  SpinDensityMatrix rho{};      // momentum independent
  double norm_k2 = 0.0;         // k^2
  Mat3 chol_precision{};        // lower L, precision = L L^T

  static GaussianSuperposition make(const Vec3& mean, const Mat3& covariance,
                                    std::vector<Vec3> centers = {Vec3{}},
                                    std::vector<cplx> weights = {cplx(1.0)},
                                    const Vec3& zeta = Vec3{}) {
    if (!(mean.z < 0.0))
      throw std::invalid_argument("GaussianSuperposition: mean momentum must have p3 < 0");
    if (centers.empty() || centers.size() != weights.size())
      throw std::invalid_argument("GaussianSuperposition: centers/weights size mismatch");
    GaussianSuperposition g;
    g.mean = mean;
    g.covariance = covariance;
    g.precision = inverse(covariance);
    g.chol_precision = cholesky(g.precision);
    g.centers = std::move(centers);
    g.weights = std::move(weights);
    g.rho = SpinDensityMatrix::from_zeta(zeta);
    // k^{-2} = (2 pi)^{3/2} sqrt(det g_ij) sum_{k,l} k_k k_l^*
    //          e^{-i p0 b_kl} e^{-g_ij b_kl b_kl / 2}
    double s = 0.0;
    for (std::size_t a = 0; a < g.centers.size(); ++a)
      for (std::size_t b = 0; b < g.centers.size(); ++b) {
        const Vec3 bab = g.centers[a] - g.centers[b];
        const cplx ph = std::polar(1.0, -dot(g.mean, bab));
        s += (g.weights[a] * std::conj(g.weights[b]) * ph).real() *
             std::exp(-0.5 * quad_form(g.covariance, bab));
      }
    if (!(s > 0.0)) throw std::invalid_argument("GaussianSuperposition: degenerate weights");
    g.norm_k2 = 1.0 / (std::pow(2.0 * constants::pi, 1.5) * std::sqrt(det(covariance)) * s);
    return g;
  }

  double structure_factor(const Vec3& p) const {
    cplx a{};
    for (std::size_t l = 0; l < centers.size(); ++l)
      a += weights[l] * std::polar(1.0, -dot(p, centers[l]));
    return std::norm(a);
  }

  double density(const Vec3& p) const {
    const Vec3 d = p - mean;
    return norm_k2 * std::exp(-0.5 * quad_form(precision, d)) * structure_factor(p);
  }

  // If the centers form a regular 1-D lattice, the spacing vector; the
  // structure factor then peaks where p.d = 2 pi n.
  std::optional<Vec3> lattice_spacing(double rel_tol = 1e-9) const {
    if (centers.size() < 2) return std::nullopt;
    const Vec3 d = centers[1] - centers[0];
    for (std::size_t l = 2; l < centers.size(); ++l) {
      const Vec3 dl = centers[l] - centers[l - 1];
      if (norm(dl - d) > rel_tol * (norm(d) + 1e-300)) return std::nullopt;
    }
    return d;
  }
};

// General pure spin state: envelope density |phi_0|^2 with spin parameters
// (tau, kappa, psi = p.b + vartheta); the effective spin precesses around
// tau as psi varies.
struct SpinSuperposition {
  GaussianSuperposition envelope{};
  Vec3 tau{0.0, 0.0, 1.0};
  double kappa = 0.0;
  Vec3 b_spin{};  // displacement between the spin components, 1/eV
  double vartheta = 0.0;

  double density(const Vec3& p) const { return envelope.density(p); }
  Vec3 zeta(const Vec3& p) const { return effective_spin(tau, kappa, dot(p, b_spin) + vartheta); }
};

// Twisted (vortex) packet: eigenstate of the total angular momentum
// projection with eigenvalue l + sigma/2.
struct TwistedPacket {
  double p_center = 0.0;  // longitudinal center, < 0
  double sigma3 = 0.0;
  double sigma_perp = 0.0;
  int l = 0;
  int spin_sigma = 0;  // +1, -1, or 0 for the natural (unpolarized) mix
  double log_k2 = 0.0;

  static TwistedPacket make(double p_center, double sigma3, double sigma_perp, int l,
                            int spin_sigma = 0) {
    if (!(p_center < 0.0)) throw std::invalid_argument("TwistedPacket: p must be negative");
    if (!(sigma3 > 0.0 && sigma_perp > 0.0))
      throw std::invalid_argument("TwistedPacket: widths must be positive");
    if (spin_sigma != 0 && spin_sigma != 1 && spin_sigma != -1)
      throw std::invalid_argument("TwistedPacket: spin projection must be +-1 or 0 (natural)");
    TwistedPacket t;
    t.p_center = p_center;
    t.sigma3 = sigma3;
    t.sigma_perp = sigma_perp;
    t.l = l;
    t.spin_sigma = spin_sigma;
    const int al = std::abs(l);
    t.log_k2 = -1.5 * std::log(2.0 * constants::pi) - std::log(sigma3) -
               2.0 * std::log(sigma_perp) - al * std::log(2.0 * sigma_perp * sigma_perp) -
               std::lgamma(al + 1.0);
    return t;
  }

  double density(const Vec3& p) const {
    const double pperp2 = p.x * p.x + p.y * p.y;
    const double dz = p.z - p_center;
    const int al = std::abs(l);
    double logc = log_k2 - 0.5 * dz * dz / (sigma3 * sigma3) -
                  0.5 * pperp2 / (sigma_perp * sigma_perp);
    if (al > 0) {
      if (pperp2 == 0.0) return 0.0;
      logc += al * std::log(pperp2);
    }
    return std::exp(logc);
  }

  Vec3 zeta(const Vec3&) const { return {0.0, 0.0, static_cast<double>(spin_sigma)}; }

  // (|l|+1) sigma_perp^2 / m^2 and sigma3/|p|, the paraxiality diagnostics.
  double paraxiality(double mass) const {
    return (std::abs(l) + 1.0) * sigma_perp * sigma_perp / (mass * mass);
  }
  double longitudinal_spread_ratio() const { return sigma3 / std::abs(p_center); }
};

// Momentum density and effective spin of a one-particle state. Probabilities
// depend only on this (c, zeta) pair; wave-function phases appear solely in
// the phase-invariance witness.
class WavePacket {
 public:
  using Storage = std::variant<GaussianSuperposition, SpinSuperposition, TwistedPacket>;

  WavePacket(GaussianSuperposition g) : s_(std::move(g)) { validate(); }
  WavePacket(SpinSuperposition g) : s_(std::move(g)) { validate(); }
  WavePacket(TwistedPacket t) : s_(std::move(t)) { validate(); }

  double density(const Vec3& p) const {
    return std::visit([&](const auto& x) { return x.density(p); }, s_);
  }

  Vec3 zeta(const Vec3& p) const {
    if (const auto* g = std::get_if<GaussianSuperposition>(&s_)) return g->rho.zeta();
    if (const auto* ss = std::get_if<SpinSuperposition>(&s_)) return ss->zeta(p);
    return std::get<TwistedPacket>(s_).zeta(p);
  }

  Vec3 mean_momentum() const {
    if (const auto* g = std::get_if<GaussianSuperposition>(&s_)) return g->mean;
    if (const auto* ss = std::get_if<SpinSuperposition>(&s_)) return ss->envelope.mean;
    return {0.0, 0.0, std::get<TwistedPacket>(s_).p_center};
  }

  // Covariance of the momentum density (per Gaussian hump for the
  // superposition; exact for the twisted packet).
  Mat3 momentum_covariance() const {
    if (const auto* g = std::get_if<GaussianSuperposition>(&s_)) return g->covariance;
    if (const auto* ss = std::get_if<SpinSuperposition>(&s_)) return ss->envelope.covariance;
    const auto& t = std::get<TwistedPacket>(s_);
    const double sp2 = (std::abs(t.l) + 1.0) * t.sigma_perp * t.sigma_perp;
    return Mat3::diag(sp2, sp2, t.sigma3 * t.sigma3);
  }

  // Upper bound on the c(p) mass at p3 >= 0; must stay below 1e-8.
  double support_violation_bound() const {
    if (const auto* t = std::get_if<TwistedPacket>(&s_))
      return gaussian_tail(std::abs(t->p_center) / t->sigma3);
    const GaussianSuperposition& g = gaussian_envelope();
    double smax = 0.0, snorm = 0.0;
    for (std::size_t a = 0; a < g.centers.size(); ++a) smax += std::abs(g.weights[a]);
    smax *= smax;
    for (std::size_t a = 0; a < g.centers.size(); ++a)
      for (std::size_t b = 0; b < g.centers.size(); ++b) {
        const Vec3 bab = g.centers[a] - g.centers[b];
        snorm += (g.weights[a] * std::conj(g.weights[b]) *
                  std::polar(1.0, -dot(g.mean, bab))).real() *
                 std::exp(-0.5 * quad_form(g.covariance, bab));
      }
    const double sigma_z = std::sqrt(g.covariance(2, 2));
    return (smax / snorm) * gaussian_tail(std::abs(g.mean.z) / sigma_z);
  }

  bool is_normal_incidence_class(double tol = 1e-3) const {
    const Mat3 c = momentum_covariance();
    const double sp = std::sqrt(std::max(c(0, 0), c(1, 1)));
    return sp / std::abs(mean_momentum().z) < tol;
  }

  // Product quadrature aligned to the packet; node weights include c(p) and
  // sum to the total captured mass (= 1 up to rule accuracy).
  std::vector<QuadNode> quadrature(int level) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

  const GaussianSuperposition* as_gaussian() const {
    return std::get_if<GaussianSuperposition>(&s_);
  }
  const TwistedPacket* as_twisted() const { return std::get_if<TwistedPacket>(&s_); }
  const SpinSuperposition* as_spin_superposition() const {
    return std::get_if<SpinSuperposition>(&s_);
  }

  // Witness for the symmetry phi -> phi e^{i xi(p)}: the returned packet
  // carries a nontrivial wave-function phase but identical (c, zeta).
  WavePacket phase_invariance_witness(unsigned seed) const {
    WavePacket copy = *this;
    copy.phase_seed_ = seed;
    return copy;
  }

  // The injected phase xi(p); identically zero when no witness phase is set.
  double wavefunction_phase(const Vec3& p) const {
    if (!phase_seed_) return 0.0;
    // Smooth pseudo-random phase generated from the seed.
    const double a = 0.1 + (*phase_seed_ % 97) / 97.0;
    const double b = 0.1 + (*phase_seed_ % 31) / 31.0;
    const Vec3 m = mean_momentum();
    const double scale = 1.0 / (norm(m) + 1e-300);
    return a * std::sin(b + scale * (p.x + 2.0 * p.y - p.z));
  }

 private:
  const GaussianSuperposition& gaussian_envelope() const {
    if (const auto* g = std::get_if<GaussianSuperposition>(&s_)) return *g;
    return std::get<SpinSuperposition>(s_).envelope;
  }

  void validate() {
    const double bound = support_violation_bound();
    if (bound > 1e-8)
      throw ConfigError("wave packet support: mass fraction bound at p3 >= 0 is " +
                        std::to_string(bound) + " (> 1e-8); move the packet to p3 < 0");
    // The 1e-8 support gate already enforces |p|/sigma3 > 5.6; warn while
    // the ratio is still marginal for the Gaussian-profile assumption.
    if (const auto* t = std::get_if<TwistedPacket>(&s_)) {
      if (std::abs(t->p_center) / t->sigma3 < 10.0)
        warnings_.push_back("twisted packet: |p|/sigma3 < 10, Gaussian longitudinal profile "
                            "assumption is marginal");
    }
  }

  Storage s_;
  std::vector<std::string> warnings_{};
  std::optional<unsigned> phase_seed_{};
};

namespace detail {
inline int gauss_order(int level) {
  static constexpr int orders[] = {12, 18, 27, 40, 60, 90};
  return orders[std::min<int>(level, 5)];
}
}  // namespace detail

inline std::vector<QuadNode> WavePacket::quadrature(int level) const {
  std::vector<QuadNode> nodes;
  if (const auto* t = as_twisted()) {
    const int al = std::abs(t->l);
    const int nr = detail::gauss_order(level);
    const int nz = detail::gauss_order(level);
    const int nphi = std::max(16, 4 * al + 8);
    const Quad1D qr = gauss_laguerre(nr, static_cast<double>(al));
    const Quad1D qz = gauss_hermite(nz);
    const Quad1D qphi = uniform_azimuth(nphi);
    nodes.reserve(static_cast<std::size_t>(nr) * nz * nphi);
    for (int i = 0; i < nr; ++i) {
      const double pperp = t->sigma_perp * std::sqrt(2.0 * qr.x[i]);
      for (int j = 0; j < nphi; ++j) {
        const double cx = pperp * std::cos(qphi.x[j]);
        const double cy = pperp * std::sin(qphi.x[j]);
        for (int k = 0; k < nz; ++k) {
          const double pz = t->p_center + std::numbers::sqrt2 * t->sigma3 * qz.x[k];
          nodes.push_back({Vec3{cx, cy, pz}, qr.w[i] * qphi.w[j] * qz.w[k]});
        }
      }
    }
    return nodes;
  }

  const GaussianSuperposition& g = gaussian_envelope();
  const int n = detail::gauss_order(level);
  const Quad1D q = gauss_hermite(n);
  const double front =
      g.norm_k2 * std::sqrt(det(g.covariance)) * std::pow(2.0 * constants::pi, 1.5);
  nodes.reserve(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec3 u{std::numbers::sqrt2 * q.x[a], std::numbers::sqrt2 * q.x[b],
                     std::numbers::sqrt2 * q.x[c]};
        const Vec3 p = g.mean + solve_lt_transposed(g.chol_precision, u);
        const double w = front * q.w[a] * q.w[b] * q.w[c] * g.structure_factor(p);
        nodes.push_back({p, w});
      }
  return nodes;
}

}  // namespace transrad
