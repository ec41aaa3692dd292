#include "stokes2p/curved_mesh.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

#include "stokes2p/quadrature.hpp"

namespace stokes2p {

const RefElement& ref_element(int degree) {
  static std::map<int, std::unique_ptr<RefElement>> cache;
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<RefElement>(degree);
  return *slot;
}

const RefEdge& ref_edge(int degree) {
  static std::map<int, std::unique_ptr<RefEdge>> cache;
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<RefEdge>(degree);
  return *slot;
}

namespace {

double spectral_norm(const Eigen::Matrix2d& m) {
  const double f2 = m.squaredNorm();
  const double det = m.determinant();
  const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

void check_jacobians(const CurvedMesh& mesh, const char* who) {
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref_element(mesh.order), rule);
  const int nn = ref_element(mesh.order).num_nodes();
  Eigen::MatrixXd coords(nn, 2);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int i = 0; i < nn; ++i) coords.row(i) = mesh.nodes[mesh.elements[e].nodes[i]].transpose();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Matrix2d jac;
      jac.col(0) = (table.dphi_dxi.row(q) * coords).transpose();
      jac.col(1) = (table.dphi_deta.row(q) * coords).transpose();
      if (jac.determinant() <= 0.0)
        throw JacobianFlip(std::string(who) + ": element map lost Jacobian positivity");
    }
  }
}

}  // namespace

CurvedMesh lenoir_curve(const FlatFittedMesh& flat, const InterfaceDescriptor& desc, int k) {
  if (k < 2) throw ValidationError("lenoir_curve requires order k >= 2");
  const RefElement& ref = ref_element(k);
  const RefEdge& edge1d = ref_edge(k);
  const std::vector<double> gl = gauss_lobatto_points(k);

  CurvedMesh mesh;
  mesh.order = k;
  mesh.domain = flat.domain;
  mesh.nodes = flat.vertices;

  // Interface edges by sorted vertex pair, for projection decisions.
  std::set<std::pair<int, int>> on_interface;
  for (const auto& e : flat.interface_edges)
    on_interface.insert({std::min(e.v0, e.v1), std::max(e.v0, e.v1)});

  // Global edge nodes, ordered from the smaller to the larger vertex id.
  std::map<std::pair<int, int>, std::vector<int>> edge_nodes;
  for (const auto& tri : flat.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri.v[e], b = tri.v[(e + 1) % 3];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (edge_nodes.count(key)) continue;
      std::vector<int> ids;
      const Vec2 xa = flat.vertices[key.first];
      const Vec2 xb = flat.vertices[key.second];
      const bool curved = on_interface.count(key) > 0;
      for (int q = 1; q < k; ++q) {
        Vec2 p = (1.0 - gl[q]) * xa + gl[q] * xb;
        if (curved) p = closest_point(p, desc);
        ids.push_back(static_cast<int>(mesh.nodes.size()));
        mesh.nodes.push_back(p);
      }
      edge_nodes[key] = std::move(ids);
    }
  }

  const int n_interior = (k - 1) * (k - 2) / 2;
  mesh.elements.reserve(flat.triangles.size());
  Eigen::VectorXd ell;
  for (const auto& tri : flat.triangles) {
    CurvedElement elem;
    elem.phase = tri.phase;
    elem.nodes.assign(ref.num_nodes(), -1);
    for (int v = 0; v < 3; ++v) elem.nodes[v] = tri.v[v];

    int curved_edge = -1;
    for (int e = 0; e < 3; ++e) {
      const int a = tri.v[e], b = tri.v[(e + 1) % 3];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (on_interface.count(key)) curved_edge = e;
      const auto& ids = edge_nodes.at(key);
      for (int q = 1; q < k; ++q) {
        const int local = 3 + e * (k - 1) + (q - 1);
        elem.nodes[local] = a < b ? ids[q - 1] : ids[k - 1 - q];
      }
    }

    if (n_interior > 0) {
      // Positions of the curved edge's k+1 nodes, in local direction.
      std::vector<Vec2> curve(k + 1);
      if (curved_edge >= 0) {
        const int a = tri.v[curved_edge];
        const int b = tri.v[(curved_edge + 1) % 3];
        curve[0] = mesh.nodes[a];
        curve[k] = mesh.nodes[b];
        for (int q = 1; q < k; ++q)
          curve[q] = mesh.nodes[elem.nodes[3 + curved_edge * (k - 1) + (q - 1)]];
      }
      int slot = 0;
      for (const RefNode& node : ref.nodes()) {
        if (node.entity != 2) continue;
        ++slot;
        const double l0 = 1.0 - node.xi - node.eta, l1 = node.xi, l2 = node.eta;
        Vec2 p = l0 * mesh.nodes[tri.v[0]] + l1 * mesh.nodes[tri.v[1]] + l2 * mesh.nodes[tri.v[2]];
        if (curved_edge >= 0) {
          // Transfinite blend: replace the affine edge trace by the curve.
          const double lam[3] = {l0, l1, l2};
          const double lp = lam[curved_edge];
          const double lq = lam[(curved_edge + 1) % 3];
          const double lc = lam[(curved_edge + 2) % 3];
          const Vec2 vc = mesh.nodes[tri.v[(curved_edge + 2) % 3]];
          const double s = lq / (lp + lq);
          edge1d.eval(s, ell);
          Vec2 on_curve = Vec2::Zero();
          for (int q = 0; q <= k; ++q) on_curve += ell[q] * curve[q];
          p = lc * vc + (lp + lq) * on_curve;
        }
        elem.nodes[3 + 3 * (k - 1) + (slot - 1)] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(p);
      }
    }
    mesh.elements.push_back(std::move(elem));
  }

  // Interface edge node lists run along the cycle.
  for (const auto& e : flat.interface_edges) {
    std::vector<int> ids(k + 1);
    ids[0] = e.v0;
    ids[k] = e.v1;
    const auto key = std::make_pair(std::min(e.v0, e.v1), std::max(e.v0, e.v1));
    const auto& enodes = edge_nodes.at(key);
    for (int q = 1; q < k; ++q) ids[q] = e.v0 < e.v1 ? enodes[q - 1] : enodes[k - 1 - q];
    mesh.interface_edges.push_back(std::move(ids));
    mesh.interface_elems.emplace_back(e.tri_minus, e.tri_plus);
  }

  // Boundary nodes: boundary vertices plus the nodes of edges that lie on
  // the rectangle (both endpoints on the boundary and midpoint pinned).
  mesh.boundary_nodes.insert(flat.boundary_vertices.begin(), flat.boundary_vertices.end());
  const Rect& box = flat.domain;
  auto on_box = [&](const Vec2& p) {
    const double tol = 1e-12 * (box.width() + box.height());
    return std::abs(p.x() - box.xmin) < tol || std::abs(p.x() - box.xmax) < tol ||
           std::abs(p.y() - box.ymin) < tol || std::abs(p.y() - box.ymax) < tol;
  };
  for (const auto& [key, ids] : edge_nodes) {
    if (!flat.boundary_vertices.count(key.first) || !flat.boundary_vertices.count(key.second))
      continue;
    const Vec2 mid = 0.5 * (flat.vertices[key.first] + flat.vertices[key.second]);
    if (!on_box(mid)) continue;
    mesh.boundary_nodes.insert(ids.begin(), ids.end());
  }

  check_jacobians(mesh, "lenoir_curve");
  return mesh;
}

CurvedMesh displace(const CurvedMesh& mesh, const std::vector<Vec2>& d) {
  if (d.size() != mesh.nodes.size())
    throw std::invalid_argument("displace: one displacement per node required");
  CurvedMesh moved = mesh;
  for (std::size_t i = 0; i < d.size(); ++i) moved.nodes[i] += d[i];
  check_jacobians(moved, "displace");
  return moved;
}

MapSample evaluate_map(const CurvedMesh& mesh, int elem, double xi, double eta) {
  const RefElement& ref = ref_element(mesh.order);
  Eigen::VectorXd phi;
  Eigen::MatrixXd grad;
  ref.eval(xi, eta, phi);
  ref.eval_grad(xi, eta, grad);
  MapSample out;
  out.x.setZero();
  out.jacobian.setZero();
  const auto& ids = mesh.elements[elem].nodes;
  for (int i = 0; i < ref.num_nodes(); ++i) {
    const Vec2& p = mesh.nodes[ids[i]];
    out.x += phi[i] * p;
    out.jacobian.col(0) += grad(i, 0) * p;
    out.jacobian.col(1) += grad(i, 1) * p;
  }
  out.det = out.jacobian.determinant();
  return out;
}

ShapeMetrics shape_metrics(const CurvedMesh& mesh) {
  const int k = mesh.order;
  const RefElement& ref = ref_element(k);
  const QuadratureRule rule = triangle_rule(2 * k + 2);
  const int nn = ref.num_nodes();

  ShapeMetrics metrics;
  metrics.min_scaled_jacobian = std::numeric_limits<double>::max();

  Eigen::VectorXd nodal_x(nn), nodal_y(nn);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& ids = mesh.elements[e].nodes;
    double h_k = 0.0;
    for (int i = 0; i < nn; ++i) {
      nodal_x[i] = mesh.nodes[ids[i]].x();
      nodal_y[i] = mesh.nodes[ids[i]].y();
      for (int j = 0; j < i; ++j)
        h_k = std::max(h_k, (mesh.nodes[ids[i]] - mesh.nodes[ids[j]]).norm());
    }
    const Eigen::VectorXd cx = ref.monomial_coefficients(nodal_x);
    const Eigen::VectorXd cy = ref.monomial_coefficients(nodal_y);

    double snorm_km1 = 0.0, snorm_k = 0.0;
    double max_j = 0.0, max_jinv = 0.0;
    double min_det = std::numeric_limits<double>::max();
    double max_j2 = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.xi[q], eta = rule.eta[q], w = rule.weights[q];
      Eigen::Matrix2d jac;
      jac(0, 0) = ref.eval_monomial_derivative(cx, 1, 0, xi, eta);
      jac(0, 1) = ref.eval_monomial_derivative(cx, 0, 1, xi, eta);
      jac(1, 0) = ref.eval_monomial_derivative(cy, 1, 0, xi, eta);
      jac(1, 1) = ref.eval_monomial_derivative(cy, 0, 1, xi, eta);
      const double det = jac.determinant();
      if (det <= 0.0) throw JacobianFlip("shape_metrics: non-positive Jacobian");
      const double sigma_max = spectral_norm(jac);
      max_j = std::max(max_j, sigma_max);
      max_jinv = std::max(max_jinv, sigma_max / det);
      max_j2 = std::max(max_j2, sigma_max * sigma_max);
      min_det = std::min(min_det, det);

      for (int order = 1; order <= k; ++order) {
        double sum = 0.0;
        for (int ax = 0; ax <= order; ++ax) {
          const int ay = order - ax;
          const double dx = ref.eval_monomial_derivative(cx, ax, ay, xi, eta);
          const double dy = ref.eval_monomial_derivative(cy, ax, ay, xi, eta);
          sum += dx * dx + dy * dy;
        }
        if (order <= k - 1) snorm_km1 += w * sum;
        snorm_k += w * sum;
      }
    }
    const double kappa_e = std::sqrt(snorm_km1) / h_k + max_j / h_k + h_k * max_jinv;
    const double kappa_star_e = std::sqrt(snorm_k) / h_k;
    metrics.kappa = std::max(metrics.kappa, kappa_e);
    metrics.kappa_star = std::max(metrics.kappa_star, kappa_star_e);
    metrics.min_scaled_jacobian = std::min(metrics.min_scaled_jacobian, min_det / max_j2);
  }
  return metrics;
}

PhaseAreas phase_areas(const CurvedMesh& mesh) {
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref_element(mesh.order), rule);
  const int nn = ref_element(mesh.order).num_nodes();
  Eigen::MatrixXd coords(nn, 2);
  PhaseAreas areas;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int i = 0; i < nn; ++i) coords.row(i) = mesh.nodes[mesh.elements[e].nodes[i]].transpose();
    double a = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Matrix2d jac;
      jac.col(0) = (table.dphi_dxi.row(q) * coords).transpose();
      jac.col(1) = (table.dphi_deta.row(q) * coords).transpose();
      a += rule.weights[q] * jac.determinant();
    }
    (mesh.elements[e].phase == Phase::minus ? areas.minus : areas.plus) += a;
  }
  return areas;
}

double interface_length(const CurvedMesh& mesh) {
  const RefEdge& edge = ref_edge(mesh.order);
  const QuadratureRule1D rule = segment_rule(2 * mesh.order + 3);
  const EdgeBasisTable table = tabulate(edge, rule);
  double length = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 tangent = Vec2::Zero();
      for (int i = 0; i <= mesh.order; ++i) tangent += table.dphi(q, i) * mesh.nodes[ids[i]];
      length += rule.weights[q] * tangent.norm();
    }
  }
  return length;
}

}  // namespace stokes2p
