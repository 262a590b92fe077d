// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace transrad {

// Nodes and normalized weights (sum w = 1) of a Gaussian rule, i.e. the
// weights are divided by the zeroth moment of the weight function.
struct Quad1D {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

// Implicit-shift QL for a symmetric tridiagonal matrix; returns eigenvalues
// in d and the first component of each eigenvector in z0 (Golub-Welsch).
inline void tql_first_components(std::vector<double>& d, std::vector<double>& e,
                                 std::vector<double>& z0) {
  const int n = static_cast<int>(d.size());
  z0.assign(n, 0.0);
  if (n == 0) return;
  z0[0] = 1.0;
  e.push_back(0.0);

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("quadrature: eigensolver failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z0[i + 1];
          z0[i + 1] = s * z0[i] + c * f;
          z0[i] = c * z0[i] - s * f;
        }
        if (!underflow) {
          d[l] -= p;
          e[l] = g;
          e[m] = 0.0;
        }
      }
    } while (m != l);
  }
}

inline Quad1D golub_welsch(std::vector<double> diag, std::vector<double> offdiag) {
  std::vector<double> z0;
  tql_first_components(diag, offdiag, z0);
  const int n = static_cast<int>(diag.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return diag[a] < diag[b]; });
  Quad1D q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    q.x[i] = diag[idx[i]];
    q.w[i] = z0[idx[i]] * z0[idx[i]];
  }
  // Renormalize the tiny eigensolver residual away so that sum w == 1.
  const double s = std::accumulate(q.w.begin(), q.w.end(), 0.0);
  for (auto& w : q.w) w /= s;
  return q;
}

}  // namespace detail

// Gauss-Hermite rule for weight e^{-x^2}; weights normalized by sqrt(pi).
inline Quad1D gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  std::vector<double> diag(n, 0.0), off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
  return detail::golub_welsch(std::move(diag), std::move(off));
}

// Generalized Gauss-Laguerre rule for weight t^alpha e^{-t} on (0, inf);
// weights normalized by Gamma(alpha + 1).
inline Quad1D gauss_laguerre(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
  if (alpha <= -1.0) throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");
  std::vector<double> diag(n), off(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + alpha));
  return detail::golub_welsch(std::move(diag), std::move(off));
}

// Midpoint rule on [0, 2 pi); spectrally accurate for periodic integrands.
// Normalized so that sum w = 1.
inline Quad1D uniform_azimuth(int n) {
  Quad1D q;
  q.x.resize(n);
  q.w.assign(n, 1.0 / n);
  for (int j = 0; j < n; ++j) q.x[j] = 2.0 * std::numbers::pi * (j + 0.5) / n;
  return q;
}

}  // namespace transrad
