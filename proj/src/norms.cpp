#include "stokes2p/norms.hpp"

#include "stokes2p/quadrature.hpp"

namespace stokes2p {

namespace {

struct BulkContext {
  QuadratureRule rule;
  BasisTable table;
  const RefElement* ref;
};

BulkContext bulk_context(const CurvedMesh& mesh, int boost) {
  BulkContext ctx;
  ctx.ref = &ref_element(mesh.order);
  ctx.rule = triangle_rule(2 * mesh.order + 2 + boost);
  ctx.table = tabulate(*ctx.ref, ctx.rule);
  return ctx;
}

// Physical position, Jacobian data at one quadrature point.
struct PointGeo {
  Vec2 x;
  Eigen::Matrix2d jinv_t;
  double jxw;
};

PointGeo point_geo(const CurvedMesh& mesh, int elem, const BulkContext& ctx, std::size_t q,
                   const Eigen::MatrixXd& coords) {
  PointGeo g;
  Eigen::Matrix2d jac;
  jac.col(0) = (ctx.table.dphi_dxi.row(q) * coords).transpose();
  jac.col(1) = (ctx.table.dphi_deta.row(q) * coords).transpose();
  g.jxw = jac.determinant() * ctx.rule.weights[q];
  g.jinv_t = jac.inverse().transpose();
  g.x = (ctx.table.phi.row(q) * coords).transpose();
  (void)mesh;
  (void)elem;
  return g;
}

void load_coords(const CurvedMesh& mesh, int elem, Eigen::MatrixXd& coords) {
  const auto& ids = mesh.elements[elem].nodes;
  coords.resize(ids.size(), 2);
  for (std::size_t i = 0; i < ids.size(); ++i)
    coords.row(i) = mesh.nodes[ids[i]].transpose();
}

}  // namespace

BulkNorms scalar_norms(const CurvedMesh& mesh, const Eigen::VectorXd& nodal, int boost) {
  return scalar_error_norms(
      mesh, nodal, [](const Vec2&) { return 0.0; },
      [](const Vec2&) { return Vec2::Zero().eval(); }, boost);
}

BulkNorms scalar_error_norms(const CurvedMesh& mesh, const Eigen::VectorXd& nodal,
                             const std::function<double(const Vec2&)>& f,
                             const std::function<Vec2(const Vec2&)>& grad_f, int boost) {
  const BulkContext ctx = bulk_context(mesh, boost);
  const int nn = ctx.ref->num_nodes();
  Eigen::MatrixXd coords;
  Eigen::VectorXd local(nn);
  double l2 = 0.0, h1 = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    load_coords(mesh, e, coords);
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) local[i] = nodal[ids[i]];
    for (std::size_t q = 0; q < ctx.rule.size(); ++q) {
      const PointGeo g = point_geo(mesh, e, ctx, q, coords);
      const double val = ctx.table.phi.row(q) * local - f(g.x);
      const Vec2 gref(ctx.table.dphi_dxi.row(q) * local, ctx.table.dphi_deta.row(q) * local);
      const Vec2 grad = g.jinv_t * gref - grad_f(g.x);
      l2 += g.jxw * val * val;
      h1 += g.jxw * grad.squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

BulkNorms velocity_norms(const CurvedMesh& mesh, const FeSystem& sys,
                         const Eigen::VectorXd& u, int boost) {
  const BulkContext ctx = bulk_context(mesh, boost);
  const int nn = ctx.ref->num_nodes();
  Eigen::MatrixXd coords;
  Eigen::VectorXd ux(nn), uy(nn);
  double l2 = 0.0, h1 = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    load_coords(mesh, e, coords);
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) {
      const int gi = sys.velocity_node_index(ids[i]);
      ux[i] = gi < 0 ? 0.0 : u[2 * gi];
      uy[i] = gi < 0 ? 0.0 : u[2 * gi + 1];
    }
    for (std::size_t q = 0; q < ctx.rule.size(); ++q) {
      const PointGeo g = point_geo(mesh, e, ctx, q, coords);
      const double vx = ctx.table.phi.row(q) * ux;
      const double vy = ctx.table.phi.row(q) * uy;
      const Vec2 gx = g.jinv_t * Vec2(ctx.table.dphi_dxi.row(q) * ux,
                                      ctx.table.dphi_deta.row(q) * ux);
      const Vec2 gy = g.jinv_t * Vec2(ctx.table.dphi_dxi.row(q) * uy,
                                      ctx.table.dphi_deta.row(q) * uy);
      l2 += g.jxw * (vx * vx + vy * vy);
      h1 += g.jxw * (gx.squaredNorm() + gy.squaredNorm());
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double pressure_error_l2(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                         const std::function<double(const Vec2&, Phase)>& f,
                         std::optional<Phase> phase, int boost) {
  const BulkContext ctx = bulk_context(mesh, boost);
  const RefElement& pref = ref_element(sys.pressure_degree());
  const BasisTable ptable = tabulate(pref, ctx.rule);
  Eigen::MatrixXd coords;
  Eigen::VectorXd local(pref.num_nodes());
  double l2 = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Phase ph = mesh.elements[e].phase;
    if (phase && *phase != ph) continue;
    load_coords(mesh, e, coords);
    const auto& pdofs = sys.pressure_element_dofs(e);
    for (int i = 0; i < pref.num_nodes(); ++i) local[i] = p[pdofs[i]];
    for (std::size_t q = 0; q < ctx.rule.size(); ++q) {
      const PointGeo g = point_geo(mesh, e, ctx, q, coords);
      const double val = ptable.phi.row(q) * local - f(g.x, ph);
      l2 += g.jxw * val * val;
    }
  }
  return std::sqrt(l2);
}

double pressure_l2(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                   std::optional<Phase> phase, int boost) {
  return pressure_error_l2(
      mesh, sys, p, [](const Vec2&, Phase) { return 0.0; }, phase, boost);
}

double pressure_integral(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                         std::optional<Phase> phase) {
  const BulkContext ctx = bulk_context(mesh, 0);
  const RefElement& pref = ref_element(sys.pressure_degree());
  const BasisTable ptable = tabulate(pref, ctx.rule);
  Eigen::MatrixXd coords;
  Eigen::VectorXd local(pref.num_nodes());
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (phase && *phase != mesh.elements[e].phase) continue;
    load_coords(mesh, e, coords);
    const auto& pdofs = sys.pressure_element_dofs(e);
    for (int i = 0; i < pref.num_nodes(); ++i) local[i] = p[pdofs[i]];
    for (std::size_t q = 0; q < ctx.rule.size(); ++q) {
      const PointGeo g = point_geo(mesh, e, ctx, q, coords);
      total += g.jxw * double(ptable.phi.row(q) * local);
    }
  }
  return total;
}

CurveNorms interface_norms(const CurvedMesh& mesh, const FeSystem& sys,
                           const Eigen::VectorXd& v, int boost) {
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  const QuadratureRule1D rule = segment_rule(2 * k + 3 + boost);
  const EdgeBasisTable table = tabulate(edge, rule);
  double l2 = 0.0, h1 = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 tangent = Vec2::Zero(), val = Vec2::Zero(), dval = Vec2::Zero();
      for (int i = 0; i <= k; ++i) {
        tangent += table.dphi(q, i) * mesh.nodes[ids[i]];
        const int gi = sys.interface_index(ids[i]);
        const Vec2 vi(v[2 * gi], v[2 * gi + 1]);
        val += table.phi(q, i) * vi;
        dval += table.dphi(q, i) * vi;
      }
      const double speed = tangent.norm();
      l2 += rule.weights[q] * speed * val.squaredNorm();
      // Surface gradient of a curve field: d/ds = (d/dt) / |x'|.
      h1 += rule.weights[q] * dval.squaredNorm() / speed;
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double interface_error_l2(const CurvedMesh& mesh, const FeSystem& sys,
                          const Eigen::VectorXd& v,
                          const std::function<Vec2(const Vec2&)>& exact, int boost) {
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  const QuadratureRule1D rule = segment_rule(2 * k + 3 + boost);
  const EdgeBasisTable table = tabulate(edge, rule);
  double l2 = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 x = Vec2::Zero(), tangent = Vec2::Zero(), val = Vec2::Zero();
      for (int i = 0; i <= k; ++i) {
        const Vec2& p = mesh.nodes[ids[i]];
        x += table.phi(q, i) * p;
        tangent += table.dphi(q, i) * p;
        const int gi = sys.interface_index(ids[i]);
        val += table.phi(q, i) * Vec2(v[2 * gi], v[2 * gi + 1]);
      }
      l2 += rule.weights[q] * tangent.norm() * (val - exact(x)).squaredNorm();
    }
  }
  return std::sqrt(l2);
}

}  // namespace stokes2p
