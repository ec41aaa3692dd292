#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stokes2p/quadrature.hpp"

namespace stokes2p {

// Node classification on the reference triangle {xi,eta >= 0, xi+eta <= 1}.
// Local ordering: the three vertices, then the interior nodes of edge 0
// (v0->v1), edge 1 (v1->v2), edge 2 (v2->v0), then cell-interior nodes.
// Edge nodes sit at Gauss-Lobatto points of the edge; interior nodes at the
// equispaced barycentric lattice.
struct RefNode {
  double xi, eta;
  int entity;     // 0 = vertex, 1 = edge, 2 = interior
  int sub;        // vertex id or edge id; -1 for interior
  int order_on_edge;  // position along the edge (1..k-1), -1 otherwise
};

// Lagrange basis of total degree k on the reference triangle, with
// evaluation backed by a monomial generalized Vandermonde factorization.
class RefElement {
 public:
  explicit RefElement(int degree);

  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<RefNode>& nodes() const { return nodes_; }

  // Values and reference gradients of all basis functions at (xi,eta).
  void eval(double xi, double eta, Eigen::VectorXd& phi) const;
  void eval_grad(double xi, double eta, Eigen::MatrixXd& grad) const;  // n x 2

  // Monomial coefficients of the polynomial interpolating nodal values;
  // column vector of length num_nodes in the monomial order (a,b), a+b<=k.
  Eigen::VectorXd monomial_coefficients(const Eigen::VectorXd& nodal) const;

  // Derivative d^ax d^ay of the monomial-coefficient polynomial at (xi,eta).
  double eval_monomial_derivative(const Eigen::VectorXd& coeffs, int ax, int ay,
                                  double xi, double eta) const;

  // Number of monomials == number of nodes.
  int num_monomials() const { return static_cast<int>(mono_.size()); }

 private:
  void monomials_at(double xi, double eta, Eigen::VectorXd& m) const;
  void monomial_grads_at(double xi, double eta, Eigen::MatrixXd& dm) const;

  int degree_;
  std::vector<RefNode> nodes_;
  std::vector<std::pair<int, int>> mono_;  // exponents (a,b)
  Eigen::PartialPivLU<Eigen::MatrixXd> vandermonde_lu_;  // V(i,j) = m_j(node_i)
};

// 1D Lagrange basis on [0,1] with nodes at the Gauss-Lobatto points of the
// given order (k+1 nodes, endpoints included). Used for curved edges and
// interface finite element functions.
class RefEdge {
 public:
  explicit RefEdge(int degree);

  int degree() const { return degree_; }
  int num_nodes() const { return degree_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  void eval(double t, Eigen::VectorXd& phi) const;
  void eval_deriv(double t, Eigen::VectorXd& dphi) const;

 private:
  int degree_;
  std::vector<double> nodes_;
};

// Precomputed basis tables at the points of a quadrature rule.
struct BasisTable {
  Eigen::MatrixXd phi;        // n_q x n_nodes
  Eigen::MatrixXd dphi_dxi;   // n_q x n_nodes
  Eigen::MatrixXd dphi_deta;  // n_q x n_nodes
};
BasisTable tabulate(const RefElement& elem, const QuadratureRule& rule);

struct EdgeBasisTable {
  Eigen::MatrixXd phi;   // n_q x n_nodes
  Eigen::MatrixXd dphi;  // n_q x n_nodes
};
EdgeBasisTable tabulate(const RefEdge& edge, const QuadratureRule1D& rule);

}  // namespace stokes2p
