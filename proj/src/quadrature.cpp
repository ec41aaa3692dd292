#include "stokes2p/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stokes2p {

namespace {

// Legendre P_n(x) and derivative via the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) { p = p0; dp = d0; return; }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    const double d2 = ((2 * j - 1) * (p1 + x * d1) - (j - 1) * d0) / j;
    p0 = p1; p1 = p2;
    d0 = d1; d1 = d2;
  }
  p = p1; dp = d1;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    legendre(n, z, p, dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

std::vector<double> gauss_lobatto_points(int order) {
  const int k = order;
  if (k < 1) throw std::invalid_argument("gauss_lobatto_points: order must be >= 1");
  std::vector<double> pts(k + 1);
  pts[0] = -1.0;
  pts[k] = 1.0;
  // Interior points are the roots of P_k'. Newton with P_k'' from the
  // Legendre ODE: (1-x^2) P'' = 2x P' - k(k+1) P.
  for (int i = 1; i < k; ++i) {
    double z = -std::cos(M_PI * i / k);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre(k, z, p, dp);
      const double ddp = (2.0 * z * dp - k * (k + 1.0) * p) / (1.0 - z * z);
      const double dz = dp / ddp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    pts[i] = z;
  }
  for (double& t : pts) t = 0.5 * (t + 1.0);  // map to [0,1]
  // Clean up the symmetric middle point.
  if (k % 2 == 0) pts[k / 2] = 0.5;
  return pts;
}

QuadratureRule1D segment_rule(int degree) {
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule1D rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  // Collapsed coordinates: xi = (1+a)(1-b)/4, eta = (1+b)/2 with
  // (a,b) in [-1,1]^2 and Jacobian (1-b)/8. The extra factor (1-b)
  // raises the b-degree by one, hence the larger b rule.
  const int na = degree / 2 + 1;
  const int nb = (degree + 1) / 2 + 1;
  std::vector<double> xa, wa, xb, wb;
  gauss_legendre(na, xa, wa);
  gauss_legendre(nb, xb, wb);
  QuadratureRule rule;
  rule.degree = degree;
  rule.xi.reserve(na * nb);
  rule.eta.reserve(na * nb);
  rule.weights.reserve(na * nb);
  for (int j = 0; j < nb; ++j) {
    for (int i = 0; i < na; ++i) {
      rule.xi.push_back(0.25 * (1.0 + xa[i]) * (1.0 - xb[j]));
      rule.eta.push_back(0.5 * (1.0 + xb[j]));
      rule.weights.push_back(wa[i] * wb[j] * (1.0 - xb[j]) / 8.0);
    }
  }
  return rule;
}

}  // namespace stokes2p
