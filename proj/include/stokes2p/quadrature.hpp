#pragma once

#include <vector>

namespace stokes2p {

// One-dimensional rule on [0,1].
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;  // exact for polynomials up to this total degree
};

// Rule on the reference triangle {xi,eta >= 0, xi+eta <= 1} (measure 1/2).
struct QuadratureRule {
  std::vector<double> xi;
  std::vector<double> eta;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

// n-point Gauss-Legendre nodes/weights on [-1,1]; exact to degree 2n-1.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Lobatto points on [0,1] for polynomial order k (k+1 points
// including both endpoints), sorted ascending.
std::vector<double> gauss_lobatto_points(int order);

// Gauss rule on [0,1] exact for the requested polynomial degree.
QuadratureRule1D segment_rule(int degree);

// Triangle rule exact for the requested total degree, built by collapsing
// a tensor Gauss grid onto the triangle. Weights are positive.
QuadratureRule triangle_rule(int degree);

}  // namespace stokes2p
