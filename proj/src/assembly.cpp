#include "stokes2p/assembly.hpp"

#include <vector>

#include "stokes2p/quadrature.hpp"

namespace stokes2p {

namespace {

using Triplet = Eigen::Triplet<double>;

struct ElementGeometry {
  Eigen::MatrixXd coords;   // n_nodes x 2
  Eigen::MatrixXd grad_x;   // n_q x n_nodes, physical d/dx of basis
  Eigen::MatrixXd grad_y;   // n_q x n_nodes
  std::vector<double> jxw;  // det * weight per point

  void compute(const CurvedMesh& mesh, int elem, const BasisTable& table,
               const QuadratureRule& rule) {
    const auto& ids = mesh.elements[elem].nodes;
    const int nn = static_cast<int>(ids.size());
    coords.resize(nn, 2);
    for (int i = 0; i < nn; ++i) coords.row(i) = mesh.nodes[ids[i]].transpose();
    const int nq = static_cast<int>(rule.size());
    grad_x.resize(nq, nn);
    grad_y.resize(nq, nn);
    jxw.resize(nq);
    for (int q = 0; q < nq; ++q) {
      Eigen::Matrix2d jac;
      jac.col(0) = (table.dphi_dxi.row(q) * coords).transpose();
      jac.col(1) = (table.dphi_deta.row(q) * coords).transpose();
      const double det = jac.determinant();
      jxw[q] = det * rule.weights[q];
      const Eigen::Matrix2d jinv = jac.inverse();
      // grad phi = J^-T grad_ref phi
      grad_x.row(q) =
          jinv(0, 0) * table.dphi_dxi.row(q) + jinv(1, 0) * table.dphi_deta.row(q);
      grad_y.row(q) =
          jinv(0, 1) * table.dphi_dxi.row(q) + jinv(1, 1) * table.dphi_deta.row(q);
    }
  }
};

}  // namespace

SparseMat assemble_viscous(const CurvedMesh& mesh, const FeSystem& sys, double nu_minus,
                           double nu_plus) {
  const RefElement& ref = ref_element(mesh.order);
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const int nn = ref.num_nodes();

  std::vector<Triplet> trips;
  trips.reserve(mesh.num_elements() * nn * nn * 4);
  ElementGeometry geo;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    geo.compute(mesh, e, table, rule);
    const double nu = mesh.elements[e].phase == Phase::minus ? nu_minus : nu_plus;
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) {
      const int gi = sys.velocity_node_index(ids[i]);
      if (gi < 0) continue;
      for (int j = 0; j < nn; ++j) {
        const int gj = sys.velocity_node_index(ids[j]);
        if (gj < 0) continue;
        double dot = 0.0;
        double gxx = 0.0, gxy = 0.0, gyx = 0.0, gyy = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double w = nu * geo.jxw[q];
          dot += w * (geo.grad_x(q, i) * geo.grad_x(q, j) + geo.grad_y(q, i) * geo.grad_y(q, j));
          gxx += w * geo.grad_x(q, i) * geo.grad_x(q, j);
          gxy += w * geo.grad_y(q, i) * geo.grad_x(q, j);
          gyx += w * geo.grad_x(q, i) * geo.grad_y(q, j);
          gyy += w * geo.grad_y(q, i) * geo.grad_y(q, j);
        }
        // 2 nu D(phi_i e_a):D(phi_j e_b) = nu (delta_ab grad.grad + d_b phi_i d_a phi_j)
        trips.emplace_back(2 * gi, 2 * gj, dot + gxx);
        trips.emplace_back(2 * gi, 2 * gj + 1, gxy);
        trips.emplace_back(2 * gi + 1, 2 * gj, gyx);
        trips.emplace_back(2 * gi + 1, 2 * gj + 1, dot + gyy);
      }
    }
  }
  SparseMat a(sys.num_velocity_dofs(), sys.num_velocity_dofs());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SparseMat assemble_velocity_mass(const CurvedMesh& mesh, const FeSystem& sys) {
  const RefElement& ref = ref_element(mesh.order);
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const int nn = ref.num_nodes();

  std::vector<Triplet> trips;
  ElementGeometry geo;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    geo.compute(mesh, e, table, rule);
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) {
      const int gi = sys.velocity_node_index(ids[i]);
      if (gi < 0) continue;
      for (int j = 0; j < nn; ++j) {
        const int gj = sys.velocity_node_index(ids[j]);
        if (gj < 0) continue;
        double m = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          m += geo.jxw[q] * table.phi(q, i) * table.phi(q, j);
        trips.emplace_back(2 * gi, 2 * gj, m);
        trips.emplace_back(2 * gi + 1, 2 * gj + 1, m);
      }
    }
  }
  SparseMat m(sys.num_velocity_dofs(), sys.num_velocity_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMat assemble_divergence(const CurvedMesh& mesh, const FeSystem& sys) {
  const RefElement& ref = ref_element(mesh.order);
  const RefElement& pref = ref_element(sys.pressure_degree());
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const BasisTable ptable = tabulate(pref, rule);
  const int nn = ref.num_nodes();
  const int np = pref.num_nodes();

  std::vector<Triplet> trips;
  ElementGeometry geo;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    geo.compute(mesh, e, table, rule);
    const auto& ids = mesh.elements[e].nodes;
    const auto& pdofs = sys.pressure_element_dofs(e);
    for (int i = 0; i < np; ++i) {
      for (int j = 0; j < nn; ++j) {
        const int gj = sys.velocity_node_index(ids[j]);
        if (gj < 0) continue;
        double bx = 0.0, by = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double w = geo.jxw[q] * ptable.phi(q, i);
          bx += w * geo.grad_x(q, j);
          by += w * geo.grad_y(q, j);
        }
        trips.emplace_back(pdofs[i], 2 * gj, bx);
        trips.emplace_back(pdofs[i], 2 * gj + 1, by);
      }
    }
  }
  SparseMat b(sys.num_pressure_dofs(), sys.num_velocity_dofs());
  b.setFromTriplets(trips.begin(), trips.end());
  return b;
}

Eigen::VectorXd assemble_pressure_mean(const CurvedMesh& mesh, const FeSystem& sys) {
  const RefElement& ref = ref_element(mesh.order);
  const RefElement& pref = ref_element(sys.pressure_degree());
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const BasisTable ptable = tabulate(pref, rule);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(sys.num_pressure_dofs());
  ElementGeometry geo;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    geo.compute(mesh, e, table, rule);
    const auto& pdofs = sys.pressure_element_dofs(e);
    for (int i = 0; i < pref.num_nodes(); ++i) {
      double v = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) v += geo.jxw[q] * ptable.phi(q, i);
      c[pdofs[i]] += v;
    }
  }
  return c;
}

Eigen::MatrixXd edge_mass_matrix(int order, const std::vector<Vec2>& points) {
  const RefEdge& edge = ref_edge(order);
  const QuadratureRule1D rule = segment_rule(2 * order + 3);
  const EdgeBasisTable table = tabulate(edge, rule);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(order + 1, order + 1);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    Vec2 tangent = Vec2::Zero();
    for (int i = 0; i <= order; ++i) tangent += table.dphi(q, i) * points[i];
    const double w = rule.weights[q] * tangent.norm();
    for (int i = 0; i <= order; ++i)
      for (int j = 0; j <= order; ++j) m(i, j) += w * table.phi(q, i) * table.phi(q, j);
  }
  return m;
}

Eigen::MatrixXd edge_stiffness_matrix(int order, const std::vector<Vec2>& points) {
  const RefEdge& edge = ref_edge(order);
  const QuadratureRule1D rule = segment_rule(2 * order + 3);
  const EdgeBasisTable table = tabulate(edge, rule);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(order + 1, order + 1);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    Vec2 tangent = Vec2::Zero();
    for (int i = 0; i <= order; ++i) tangent += table.dphi(q, i) * points[i];
    const double w = rule.weights[q] / tangent.norm();
    for (int i = 0; i <= order; ++i)
      for (int j = 0; j <= order; ++j) s(i, j) += w * table.dphi(q, i) * table.dphi(q, j);
  }
  return s;
}

InterfaceOperators assemble_interface(const CurvedMesh& mesh, const FeSystem& sys) {
  const int k = mesh.order;
  std::vector<Triplet> tm, ts, tmc, tsc;
  std::vector<Vec2> pts(k + 1);
  for (const auto& ids : mesh.interface_edges) {
    for (int i = 0; i <= k; ++i) pts[i] = mesh.nodes[ids[i]];
    const Eigen::MatrixXd m = edge_mass_matrix(k, pts);
    const Eigen::MatrixXd s = edge_stiffness_matrix(k, pts);
    for (int i = 0; i <= k; ++i) {
      const int gi = sys.interface_index(ids[i]);
      for (int j = 0; j <= k; ++j) {
        const int gj = sys.interface_index(ids[j]);
        const int uj = sys.velocity_node_index(ids[j]);
        for (int comp = 0; comp < 2; ++comp) {
          tm.emplace_back(2 * gi + comp, 2 * gj + comp, m(i, j));
          ts.emplace_back(2 * gi + comp, 2 * gj + comp, s(i, j));
          if (uj >= 0) {
            tmc.emplace_back(2 * gi + comp, 2 * uj + comp, m(i, j));
            tsc.emplace_back(2 * gi + comp, 2 * uj + comp, s(i, j));
          }
        }
      }
    }
  }
  InterfaceOperators ops;
  const int nk = sys.num_interface_dofs();
  const int nu = sys.num_velocity_dofs();
  ops.mass.resize(nk, nk);
  ops.stiffness.resize(nk, nk);
  ops.mass_trace.resize(nk, nu);
  ops.stiffness_trace.resize(nk, nu);
  ops.mass.setFromTriplets(tm.begin(), tm.end());
  ops.stiffness.setFromTriplets(ts.begin(), ts.end());
  ops.mass_trace.setFromTriplets(tmc.begin(), tmc.end());
  ops.stiffness_trace.setFromTriplets(tsc.begin(), tsc.end());
  return ops;
}

double symmetry_defect(const SparseMat& m) {
  SparseMat d = SparseMat(m.transpose()) - m;
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMat::InnerIterator it(d, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace stokes2p
