#include "stokes2p/ref_element.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace stokes2p {

namespace {

// Reference vertices in barycentric order (lambda0, lambda1, lambda2).
const std::array<std::array<double, 2>, 3> kVerts = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};

}  // namespace

RefElement::RefElement(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("RefElement: degree must be >= 1");
  const int k = degree;

  for (int v = 0; v < 3; ++v) nodes_.push_back({kVerts[v][0], kVerts[v][1], 0, v, -1});

  const std::vector<double> gl = gauss_lobatto_points(k);
  for (int e = 0; e < 3; ++e) {
    const int va = e, vb = (e + 1) % 3;
    for (int q = 1; q < k; ++q) {
      const double t = gl[q];
      nodes_.push_back({(1.0 - t) * kVerts[va][0] + t * kVerts[vb][0],
                        (1.0 - t) * kVerts[va][1] + t * kVerts[vb][1], 1, e, q});
    }
  }
  for (int i = 1; i <= k - 2; ++i)
    for (int j = 1; j <= k - 1 - i; ++j)
      nodes_.push_back({double(i) / k, double(j) / k, 2, -1, -1});

  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k - a; ++b) mono_.emplace_back(a, b);

  const int n = num_nodes();
  if (static_cast<int>(mono_.size()) != n)
    throw std::logic_error("RefElement: node/monomial count mismatch");
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) {
    monomials_at(nodes_[i].xi, nodes_[i].eta, m);
    V.row(i) = m.transpose();
  }
  vandermonde_lu_.compute(V);
}

void RefElement::monomials_at(double xi, double eta, Eigen::VectorXd& m) const {
  m.resize(num_monomials());
  for (std::size_t j = 0; j < mono_.size(); ++j)
    m[j] = std::pow(xi, mono_[j].first) * std::pow(eta, mono_[j].second);
}

void RefElement::monomial_grads_at(double xi, double eta, Eigen::MatrixXd& dm) const {
  dm.resize(num_monomials(), 2);
  for (std::size_t j = 0; j < mono_.size(); ++j) {
    const int a = mono_[j].first, b = mono_[j].second;
    dm(j, 0) = a == 0 ? 0.0 : a * std::pow(xi, a - 1) * std::pow(eta, b);
    dm(j, 1) = b == 0 ? 0.0 : b * std::pow(xi, a) * std::pow(eta, b - 1);
  }
}

void RefElement::eval(double xi, double eta, Eigen::VectorXd& phi) const {
  // phi_i(x) = sum_j (V^-1)_{ji} m_j(x), i.e. phi = V^-T m.
  Eigen::VectorXd m;
  monomials_at(xi, eta, m);
  phi = vandermonde_lu_.transpose().solve(m);
}

void RefElement::eval_grad(double xi, double eta, Eigen::MatrixXd& grad) const {
  Eigen::MatrixXd dm;
  monomial_grads_at(xi, eta, dm);
  grad = vandermonde_lu_.transpose().solve(dm);
}

Eigen::VectorXd RefElement::monomial_coefficients(const Eigen::VectorXd& nodal) const {
  return vandermonde_lu_.solve(nodal);
}

double RefElement::eval_monomial_derivative(const Eigen::VectorXd& coeffs, int ax, int ay,
                                            double xi, double eta) const {
  double value = 0.0;
  for (std::size_t j = 0; j < mono_.size(); ++j) {
    const int a = mono_[j].first, b = mono_[j].second;
    if (a < ax || b < ay) continue;
    double f = 1.0;
    for (int r = 0; r < ax; ++r) f *= (a - r);
    for (int r = 0; r < ay; ++r) f *= (b - r);
    value += coeffs[j] * f * std::pow(xi, a - ax) * std::pow(eta, b - ay);
  }
  return value;
}

RefEdge::RefEdge(int degree) : degree_(degree), nodes_(gauss_lobatto_points(degree)) {
  if (degree < 1) throw std::invalid_argument("RefEdge: degree must be >= 1");
}

void RefEdge::eval(double t, Eigen::VectorXd& phi) const {
  const int n = num_nodes();
  phi.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) v *= (t - nodes_[j]) / (nodes_[i] - nodes_[j]);
    phi[i] = v;
  }
}

void RefEdge::eval_deriv(double t, Eigen::VectorXd& dphi) const {
  const int n = num_nodes();
  dphi.resize(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      double prod = 1.0 / (nodes_[i] - nodes_[m]);
      for (int j = 0; j < n; ++j)
        if (j != i && j != m) prod *= (t - nodes_[j]) / (nodes_[i] - nodes_[j]);
      sum += prod;
    }
    dphi[i] = sum;
  }
}

BasisTable tabulate(const RefElement& elem, const QuadratureRule& rule) {
  const int nq = static_cast<int>(rule.size());
  const int nn = elem.num_nodes();
  BasisTable table;
  table.phi.resize(nq, nn);
  table.dphi_dxi.resize(nq, nn);
  table.dphi_deta.resize(nq, nn);
  Eigen::VectorXd phi;
  Eigen::MatrixXd grad;
  for (int q = 0; q < nq; ++q) {
    elem.eval(rule.xi[q], rule.eta[q], phi);
    elem.eval_grad(rule.xi[q], rule.eta[q], grad);
    table.phi.row(q) = phi.transpose();
    table.dphi_dxi.row(q) = grad.col(0).transpose();
    table.dphi_deta.row(q) = grad.col(1).transpose();
  }
  return table;
}

EdgeBasisTable tabulate(const RefEdge& edge, const QuadratureRule1D& rule) {
  const int nq = static_cast<int>(rule.points.size());
  const int nn = edge.num_nodes();
  EdgeBasisTable table;
  table.phi.resize(nq, nn);
  table.dphi.resize(nq, nn);
  Eigen::VectorXd v;
  for (int q = 0; q < nq; ++q) {
    edge.eval(rule.points[q], v);
    table.phi.row(q) = v.transpose();
    edge.eval_deriv(rule.points[q], v);
    table.dphi.row(q) = v.transpose();
  }
  return table;
}

}  // namespace stokes2p
