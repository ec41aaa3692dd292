#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stokes2p/curved_mesh.hpp"
#include "stokes2p/quadrature.hpp"
#include "stokes2p/ref_element.hpp"

using namespace stokes2p;

namespace {

// Exact integral of xi^a eta^b over the reference triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
  double v = 1.0;
  for (int i = 1; i <= a; ++i) v *= i;
  for (int i = 1; i <= b; ++i) v *= i;
  for (int i = 1; i <= a + b + 2; ++i) v /= i;
  return v;
}

}  // namespace

TEST_CASE("segment rules integrate monomials to declared degree") {
  for (int degree = 1; degree <= 13; ++degree) {
    const QuadratureRule1D rule = segment_rule(degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    for (int p = 0; p <= degree; ++p) {
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        sum += rule.weights[q] * std::pow(rule.points[q], p);
      CHECK(std::abs(sum - 1.0 / (p + 1)) < 1e-13);
    }
  }
}

TEST_CASE("triangle rules integrate monomials to declared degree") {
  for (int degree = 2; degree <= 12; degree += 2) {
    const QuadratureRule rule = triangle_rule(degree);
    double total = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(std::abs(total - 0.5) < 1e-14);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.xi[q], a) * std::pow(rule.eta[q], b);
        CHECK(std::abs(sum - monomial_integral(a, b)) < 1e-13);
      }
    }
  }
}

TEST_CASE("Gauss-Lobatto points include endpoints and classic values") {
  const auto p2 = gauss_lobatto_points(2);
  CHECK(p2.size() == 3);
  CHECK(p2[0] == 0.0);
  CHECK(p2[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p2[2] == 1.0);

  const auto p3 = gauss_lobatto_points(3);
  // interior points at (1 -+ 1/sqrt(5)) / 2
  CHECK(p3[1] == doctest::Approx(0.5 * (1.0 - 1.0 / std::sqrt(5.0))).epsilon(1e-14));
  CHECK(p3[2] == doctest::Approx(0.5 * (1.0 + 1.0 / std::sqrt(5.0))).epsilon(1e-14));

  const auto p4 = gauss_lobatto_points(4);
  CHECK(p4[1] == doctest::Approx(0.5 * (1.0 - std::sqrt(3.0 / 7.0))).epsilon(1e-14));
  CHECK(p4[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("reference element basis has the nodal delta property") {
  for (int k = 1; k <= 4; ++k) {
    const RefElement& ref = ref_element(k);
    CHECK(ref.num_nodes() == (k + 1) * (k + 2) / 2);
    Eigen::VectorXd phi;
    for (int i = 0; i < ref.num_nodes(); ++i) {
      ref.eval(ref.nodes()[i].xi, ref.nodes()[i].eta, phi);
      for (int j = 0; j < ref.num_nodes(); ++j)
        CHECK(std::abs(phi[j] - (i == j ? 1.0 : 0.0)) < 1e-11);
    }
  }
}

TEST_CASE("reference element reproduces polynomials and their gradients") {
  for (int k = 2; k <= 4; ++k) {
    const RefElement& ref = ref_element(k);
    auto f = [&](double x, double y) { return std::pow(1.0 + x, k) + x * y; };
    auto fx = [&](double x, double y) {
      (void)y;
      return k * std::pow(1.0 + x, k - 1) + y;
    };
    Eigen::VectorXd nodal(ref.num_nodes());
    for (int i = 0; i < ref.num_nodes(); ++i)
      nodal[i] = f(ref.nodes()[i].xi, ref.nodes()[i].eta);
    Eigen::VectorXd phi;
    Eigen::MatrixXd grad;
    for (double xi : {0.11, 0.4}) {
      for (double eta : {0.22, 0.3}) {
        ref.eval(xi, eta, phi);
        ref.eval_grad(xi, eta, grad);
        CHECK(std::abs(phi.dot(nodal) - f(xi, eta)) < 1e-11);
        CHECK(std::abs(grad.col(0).dot(nodal) - fx(xi, eta)) < 1e-10);
      }
    }
    // Monomial representation agrees with direct derivative evaluation.
    const Eigen::VectorXd coeffs = ref.monomial_coefficients(nodal);
    CHECK(std::abs(ref.eval_monomial_derivative(coeffs, 0, 0, 0.3, 0.25) - f(0.3, 0.25)) <
          1e-11);
    CHECK(std::abs(ref.eval_monomial_derivative(coeffs, 1, 0, 0.3, 0.25) - fx(0.3, 0.25)) <
          1e-10);
  }
}

TEST_CASE("edge basis reproduces polynomials") {
  for (int k = 1; k <= 4; ++k) {
    const RefEdge& edge = ref_edge(k);
    Eigen::VectorXd nodal(k + 1), phi, dphi;
    for (int i = 0; i <= k; ++i) nodal[i] = std::pow(edge.nodes()[i], k);
    edge.eval(0.37, phi);
    edge.eval_deriv(0.37, dphi);
    CHECK(std::abs(phi.dot(nodal) - std::pow(0.37, k)) < 1e-12);
    CHECK(std::abs(dphi.dot(nodal) - k * std::pow(0.37, k - 1)) < 1e-11);
  }
}
