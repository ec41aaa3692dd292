#include "stokes2p/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stokes2p/mesh_io.hpp"
#include "stokes2p/norms.hpp"
#include "stokes2p/quadrature.hpp"

namespace stokes2p {

namespace {

double rate_between(double e0, double e1, double h0, double h1) {
  if (e0 <= 0.0 || e1 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e0 / e1) / std::log(h0 / h1);
}

}  // namespace

EocTable eoc(const std::vector<ErrorRecord>& records) {
  if (records.size() < 2) throw ValidationError("eoc needs at least two levels");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (!(records[i].h < records[i - 1].h))
      throw ValidationError("eoc levels must be strictly ordered in h");
  EocTable table;
  table.records = records;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const ErrorRecord& a = records[i];
    const ErrorRecord& b = records[i + 1];
    table.rates.push_back({rate_between(a.u_h1, b.u_h1, a.h, b.h),
                           rate_between(a.p_l2, b.p_l2, a.h, b.h),
                           rate_between(a.x_h1, b.x_h1, a.h, b.h),
                           rate_between(a.kappa_l2, b.kappa_l2, a.h, b.h),
                           rate_between(a.pressure_jump, b.pressure_jump, a.h, b.h)});
  }
  return table;
}

std::string EocTable::to_csv() const {
  std::string out =
      "h,tau,u_H1,p_L2,x_H1,kappa_L2,pressure_jump,source,"
      "rate_u,rate_p,rate_x,rate_kappa,rate_jump\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ErrorRecord& r = records[i];
    out += format_double(r.h) + "," + format_double(r.tau) + "," + format_double(r.u_h1) + "," +
           format_double(r.p_l2) + "," + format_double(r.x_h1) + "," +
           format_double(r.kappa_l2) + "," + format_double(r.pressure_jump) + "," + r.source;
    if (i > 0) {
      const Rates& q = rates[i - 1];
      out += "," + format_double(q.u_h1) + "," + format_double(q.p_l2) + "," +
             format_double(q.x_h1) + "," + format_double(q.kappa_l2) + "," +
             format_double(q.pressure_jump);
    } else {
      out += ",,,,,";
    }
    out += "\n";
  }
  return out;
}

std::string EocTable::to_text() const {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-10s %-10s %-12s %-12s %-12s %-12s %-12s\n", "h", "tau",
                "u_H1", "p_L2", "x_H1", "kappa_L2", "p_jump");
  out += buf;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ErrorRecord& r = records[i];
    std::snprintf(buf, sizeof buf, "%-10.4g %-10.4g %-12.5g %-12.5g %-12.5g %-12.5g %-12.5g\n",
                  r.h, r.tau, r.u_h1, r.p_l2, r.x_h1, r.kappa_l2, r.pressure_jump);
    out += buf;
    if (i + 1 < records.size()) {
      const Rates& q = rates[i];
      std::snprintf(buf, sizeof buf,
                    "%-10s %-10s %-12.3f %-12.3f %-12.3f %-12.3f %-12.3f\n", "", "rate:",
                    q.u_h1, q.p_l2, q.x_h1, q.kappa_l2, q.pressure_jump);
      out += buf;
    }
  }
  return out;
}

ProjectionError projection_error(const CurvedMesh& mesh, const FeSystem& sys,
                                 const InterfaceDescriptor& desc) {
  const auto& cycle = sys.interface_cycle();
  ProjectionError err;
  err.nodal.resize(sys.num_interface_dofs());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vec2& x = mesh.nodes[cycle[i]];
    const Vec2 e = x - closest_point(x, desc);
    err.nodal[2 * i] = e.x();
    err.nodal[2 * i + 1] = e.y();
  }
  err.h1 = interface_norms(mesh, sys, err.nodal).h1();
  return err;
}

double laplace_young_error(const CurvedMesh& mesh, const FeSystem& sys,
                           const Eigen::VectorXd& p, double radius) {
  const PhaseAreas areas = phase_areas(mesh);
  const double mean_minus = pressure_integral(mesh, sys, p, Phase::minus) / areas.minus;
  const double mean_plus = pressure_integral(mesh, sys, p, Phase::plus) / areas.plus;
  return std::abs(mean_minus - mean_plus - 1.0 / radius) * radius;
}

ErrorRecord theorem_errors_exact_circle(const StateSnapshot& state, const FeSystem& sys,
                                        const InterfaceDescriptor& circle, double h,
                                        double tau) {
  if (circle.kind() != InterfaceDescriptor::Kind::circle)
    throw ValidationError("exact-solution errors require a circle interface");
  const double radius = circle.param_radius();
  const Vec2 center = circle.center();
  const CurvedMesh& mesh = state.mesh;

  // Exact fields: u = 0; p piecewise constant with jump 1/R and zero mean
  // over the rectangle; kappa = (1/R) n extended radially.
  const double area = mesh.domain.area();
  const double area_minus = M_PI * radius * radius;
  const double p_minus = (1.0 / radius) * (area - area_minus) / area;
  const double p_plus = p_minus - 1.0 / radius;

  ErrorRecord rec;
  rec.h = h;
  rec.tau = tau;
  rec.source = "exact_circle";
  rec.u_h1 = velocity_norms(mesh, sys, state.u).h1();

  const Eigen::VectorXd p_cmp = interpolate_pressure(
      mesh, sys, [&](const Vec2&, Phase ph) { return ph == Phase::minus ? p_minus : p_plus; });
  rec.p_l2 = pressure_l2(mesh, sys, state.p - p_cmp);

  rec.x_h1 = projection_error(mesh, sys, circle).h1;

  const Eigen::VectorXd kappa_cmp = interpolate_interface(mesh, sys, [&](const Vec2& x) {
    return ((x - center).normalized() / radius).eval();
  });
  rec.kappa_l2 = interface_norms(mesh, sys, state.kappa - kappa_cmp).l2;

  rec.pressure_jump = laplace_young_error(mesh, sys, state.p, radius);
  return rec;
}

// ----- transport identities -----

double interface_product_integral(const CurvedMesh& mesh, const FeSystem& sys,
                                  const Eigen::VectorXd& positions, const Eigen::VectorXd& f,
                                  const Eigen::VectorXd& g) {
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  const QuadratureRule1D rule = segment_rule(2 * k + 3);
  const EdgeBasisTable table = tabulate(edge, rule);
  double total = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 tangent = Vec2::Zero();
      double fv = 0.0, gv = 0.0;
      for (int i = 0; i <= k; ++i) {
        const int gi = sys.interface_index(ids[i]);
        tangent += table.dphi(q, i) * Vec2(positions[2 * gi], positions[2 * gi + 1]);
        fv += table.phi(q, i) * f[gi];
        gv += table.phi(q, i) * g[gi];
      }
      total += rule.weights[q] * tangent.norm() * fv * gv;
    }
  }
  return total;
}

double interface_transport_form(const CurvedMesh& mesh, const FeSystem& sys,
                                const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                const Eigen::VectorXd& e) {
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  const QuadratureRule1D rule = segment_rule(2 * k + 3);
  const EdgeBasisTable table = tabulate(edge, rule);
  double total = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 tangent = Vec2::Zero(), de = Vec2::Zero();
      double fv = 0.0, gv = 0.0;
      for (int i = 0; i <= k; ++i) {
        const int gi = sys.interface_index(ids[i]);
        tangent += table.dphi(q, i) * mesh.nodes[ids[i]];
        de += table.dphi(q, i) * Vec2(e[2 * gi], e[2 * gi + 1]);
        fv += table.phi(q, i) * f[gi];
        gv += table.phi(q, i) * g[gi];
      }
      // div_Gamma e = t_hat . de/ds with ds = |x'| dt; the measure |x'| dt
      // cancels one factor of |x'|.
      total += rule.weights[q] * fv * gv * tangent.dot(de) / tangent.norm();
    }
  }
  return total;
}

double bulk_product_integral(const CurvedMesh& mesh, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g) {
  const RefElement& ref = ref_element(mesh.order);
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const int nn = ref.num_nodes();
  Eigen::MatrixXd coords(nn, 2);
  Eigen::VectorXd fl(nn), gl(nn);
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) {
      coords.row(i) = mesh.nodes[ids[i]].transpose();
      fl[i] = f[ids[i]];
      gl[i] = g[ids[i]];
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Matrix2d jac;
      jac.col(0) = (table.dphi_dxi.row(q) * coords).transpose();
      jac.col(1) = (table.dphi_deta.row(q) * coords).transpose();
      total += rule.weights[q] * jac.determinant() * double(table.phi.row(q) * fl) *
               double(table.phi.row(q) * gl);
    }
  }
  return total;
}

double bulk_transport_form(const CurvedMesh& mesh, const Eigen::VectorXd& f,
                           const Eigen::VectorXd& g, const std::vector<Vec2>& d) {
  const RefElement& ref = ref_element(mesh.order);
  const QuadratureRule rule = triangle_rule(2 * mesh.order + 2);
  const BasisTable table = tabulate(ref, rule);
  const int nn = ref.num_nodes();
  Eigen::MatrixXd coords(nn, 2);
  Eigen::VectorXd fl(nn), gl(nn), dx(nn), dy(nn);
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < nn; ++i) {
      coords.row(i) = mesh.nodes[ids[i]].transpose();
      fl[i] = f[ids[i]];
      gl[i] = g[ids[i]];
      dx[i] = d[ids[i]].x();
      dy[i] = d[ids[i]].y();
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Matrix2d jac;
      jac.col(0) = (table.dphi_dxi.row(q) * coords).transpose();
      jac.col(1) = (table.dphi_deta.row(q) * coords).transpose();
      const Eigen::Matrix2d jinv = jac.inverse();
      const double ddx_ref_xi = table.dphi_dxi.row(q) * dx;
      const double ddx_ref_eta = table.dphi_deta.row(q) * dx;
      const double ddy_ref_xi = table.dphi_dxi.row(q) * dy;
      const double ddy_ref_eta = table.dphi_deta.row(q) * dy;
      const double div = ddx_ref_xi * jinv(0, 0) + ddx_ref_eta * jinv(1, 0) +
                         ddy_ref_xi * jinv(0, 1) + ddy_ref_eta * jinv(1, 1);
      total += rule.weights[q] * jac.determinant() * double(table.phi.row(q) * fl) *
               double(table.phi.row(q) * gl) * div;
    }
  }
  return total;
}

bool IdentityReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string IdentityReport::to_text() const {
  std::string out;
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s %-34s value=%.6g threshold%s%.6g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                  c.larger_is_better ? ">=" : "<=", c.threshold);
    out += buf;
  }
  return out;
}

IdentityReport identity_suite(const CurvedMesh& mesh, const FeSystem& sys) {
  IdentityReport report;

  // Transport theorem on the interface: theta -> int_{Gamma+theta e} f g has
  // derivative int f g div_Gamma e at theta = 0 when f, g ride the nodes.
  {
    const auto& cycle = sys.interface_cycle();
    const int n = static_cast<int>(cycle.size());
    Eigen::VectorXd f(n), g(n), e(2 * n);
    for (int i = 0; i < n; ++i) {
      const Vec2& x = mesh.nodes[cycle[i]];
      f[i] = x.x() * x.x();
      g[i] = x.x() + 2.0 * x.y();
      e[2 * i] = std::sin(x.x() + x.y());
      e[2 * i + 1] = std::cos(x.x() - x.y());
    }
    const Eigen::VectorXd base = sys.interface_positions(mesh);
    const double form = interface_transport_form(mesh, sys, f, g, e);
    auto residual = [&](double dt) {
      const double plus = interface_product_integral(mesh, sys, base + dt * e, f, g);
      const double minus = interface_product_integral(mesh, sys, base - dt * e, f, g);
      return std::abs((plus - minus) / (2.0 * dt) - form);
    };
    const double r3 = residual(1e-3);
    const double r4 = residual(1e-4);
    const double ratio = r4 > 0.0 ? r3 / r4 : std::numeric_limits<double>::infinity();
    report.checks.push_back({"interface-transport-fd-ratio", ratio, 50.0, ratio >= 50.0, true});
  }

  // Bulk transport theorem with a smooth displacement vanishing on the
  // boundary (so the domain itself is preserved to first order).
  {
    const int n = mesh.num_nodes();
    Eigen::VectorXd f(n), g(n);
    std::vector<Vec2> d(n);
    const Rect& box = mesh.domain;
    for (int i = 0; i < n; ++i) {
      const Vec2& x = mesh.nodes[i];
      f[i] = x.x() * x.x() + x.y();
      g[i] = 1.0 + x.x() * x.y();
      const double bump = (x.x() - box.xmin) * (box.xmax - x.x()) * (x.y() - box.ymin) *
                          (box.ymax - x.y());
      d[i] = bump * Vec2(std::sin(x.y()), std::cos(x.x()));
    }
    const double form = bulk_transport_form(mesh, f, g, d);
    auto shifted = [&](double dt) {
      std::vector<Vec2> scaled(n);
      for (int i = 0; i < n; ++i) scaled[i] = dt * d[i];
      const CurvedMesh moved = displace(mesh, scaled);
      return bulk_product_integral(moved, f, g);
    };
    auto residual = [&](double dt) {
      return std::abs((shifted(dt) - shifted(-dt)) / (2.0 * dt) - form);
    };
    const double r3 = residual(1e-3);
    const double r4 = residual(1e-4);
    const double ratio = r4 > 0.0 ? r3 / r4 : std::numeric_limits<double>::infinity();
    report.checks.push_back({"bulk-transport-fd-ratio", ratio, 50.0, ratio >= 50.0, true});
  }

  // Closed-curve integration by parts on the analytic unit-ish circle:
  // int_G f D_i g + int_G (D_i f) g = int_G f g H n_i, no boundary term.
  {
    const double radius = 0.8;
    const Vec2 center(0.1, -0.2);
    struct Pair {
      std::function<double(const Vec2&)> f, g;
      std::function<Vec2(const Vec2&)> grad_f, grad_g;
    };
    std::vector<Pair> pairs;
    pairs.push_back({[](const Vec2& x) { return x.x(); }, [](const Vec2&) { return 1.0; },
                     [](const Vec2&) { return Vec2(1.0, 0.0); },
                     [](const Vec2&) { return Vec2(0.0, 0.0); }});
    pairs.push_back({[](const Vec2& x) { return x.x() * x.x(); },
                     [](const Vec2& x) { return x.y(); },
                     [](const Vec2& x) { return Vec2(2.0 * x.x(), 0.0); },
                     [](const Vec2&) { return Vec2(0.0, 1.0); }});
    pairs.push_back({[](const Vec2& x) { return x.x() * x.y(); },
                     [](const Vec2& x) { return x.x(); },
                     [](const Vec2& x) { return Vec2(x.y(), x.x()); },
                     [](const Vec2&) { return Vec2(1.0, 0.0); }});
    double worst = 0.0;
    const int panels = 512;
    std::vector<double> gx, gw;
    gauss_legendre(8, gx, gw);
    for (const Pair& pr : pairs) {
      for (int comp = 0; comp < 2; ++comp) {
        double lhs = 0.0, rhs = 0.0;
        for (int pan = 0; pan < panels; ++pan) {
          const double t0 = 2.0 * M_PI * pan / panels;
          const double t1 = 2.0 * M_PI * (pan + 1) / panels;
          for (int q = 0; q < 8; ++q) {
            const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[q];
            const double w = 0.5 * (t1 - t0) * gw[q] * radius;  // |gamma'| = R
            const Vec2 n(std::cos(t), std::sin(t));
            const Vec2 x = center + radius * n;
            const Eigen::Matrix2d tang = Eigen::Matrix2d::Identity() - n * n.transpose();
            const Vec2 sgf = tang * pr.grad_f(x);
            const Vec2 sgg = tang * pr.grad_g(x);
            lhs += w * (sgf[comp] * pr.g(x) + pr.f(x) * sgg[comp]);
            rhs += w * pr.f(x) * pr.g(x) * (1.0 / radius) * n[comp];
          }
        }
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    report.checks.push_back({"circle-integration-by-parts", worst, 1e-8, worst <= 1e-8, false});
  }

  return report;
}

// ----- point location -----

PointLocator::PointLocator(const CurvedMesh& mesh) : mesh_(mesh) {
  box_ = mesh.domain;
  const int n = std::max(4, static_cast<int>(std::sqrt(double(mesh.num_elements()))));
  nx_ = ny_ = n;
  bins_.assign(nx_ * ny_, {});
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int id : mesh.elements[e].nodes) {
      xmin = std::min(xmin, mesh.nodes[id].x());
      xmax = std::max(xmax, mesh.nodes[id].x());
      ymin = std::min(ymin, mesh.nodes[id].y());
      ymax = std::max(ymax, mesh.nodes[id].y());
    }
    const double pad = 0.2 * std::max(xmax - xmin, ymax - ymin);
    const int i0 = std::clamp(int((xmin - pad - box_.xmin) / box_.width() * nx_), 0, nx_ - 1);
    const int i1 = std::clamp(int((xmax + pad - box_.xmin) / box_.width() * nx_), 0, nx_ - 1);
    const int j0 = std::clamp(int((ymin - pad - box_.ymin) / box_.height() * ny_), 0, ny_ - 1);
    const int j1 = std::clamp(int((ymax + pad - box_.ymin) / box_.height() * ny_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins_[j * nx_ + i].push_back(e);
  }
}

std::optional<PointLocator::Hit> PointLocator::locate(const Vec2& x,
                                                      std::optional<Phase> phase) const {
  const int i = std::clamp(int((x.x() - box_.xmin) / box_.width() * nx_), 0, nx_ - 1);
  const int j = std::clamp(int((x.y() - box_.ymin) / box_.height() * ny_), 0, ny_ - 1);
  std::optional<Hit> best;
  double best_violation = 1e300;
  for (int ring = 0; ring < 3; ++ring) {
    for (int dj = -ring; dj <= ring; ++dj) {
      for (int di = -ring; di <= ring; ++di) {
        if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || ii >= nx_ || jj < 0 || jj >= ny_) continue;
        for (int e : bins_[jj * nx_ + ii]) {
          if (phase && mesh_.elements[e].phase != *phase) continue;
          // Newton inversion of the element map.
          double xi = 1.0 / 3.0, eta = 1.0 / 3.0;
          bool converged = false;
          for (int it = 0; it < 30; ++it) {
            const MapSample s = evaluate_map(mesh_, e, xi, eta);
            const Vec2 r = x - s.x;
            if (r.norm() < 1e-13 * (1.0 + x.norm())) {
              converged = true;
              break;
            }
            const Vec2 dxi = s.jacobian.inverse() * r;
            xi += dxi.x();
            eta += dxi.y();
            if (!std::isfinite(xi) || !std::isfinite(eta) || std::abs(xi) > 10 ||
                std::abs(eta) > 10)
              break;
          }
          if (!converged) continue;
          const double violation =
              std::max({-xi, -eta, xi + eta - 1.0, 0.0});
          if (violation < 1e-9) return Hit{e, xi, eta};
          if (violation < best_violation) {
            best_violation = violation;
            best = Hit{e, xi, eta};
          }
        }
      }
    }
    if (best && best_violation < 1e-6) break;
  }
  if (best && best_violation < 1e-6) return best;
  return std::nullopt;
}

double evaluate_scalar_at(const CurvedMesh& mesh, const Eigen::VectorXd& nodal,
                          const PointLocator::Hit& hit) {
  const RefElement& ref = ref_element(mesh.order);
  Eigen::VectorXd phi;
  ref.eval(hit.xi, hit.eta, phi);
  double v = 0.0;
  const auto& ids = mesh.elements[hit.elem].nodes;
  for (int i = 0; i < ref.num_nodes(); ++i) v += phi[i] * nodal[ids[i]];
  return v;
}

Vec2 evaluate_velocity_at(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& u,
                          const PointLocator::Hit& hit) {
  const RefElement& ref = ref_element(mesh.order);
  Eigen::VectorXd phi;
  ref.eval(hit.xi, hit.eta, phi);
  Vec2 v = Vec2::Zero();
  const auto& ids = mesh.elements[hit.elem].nodes;
  for (int i = 0; i < ref.num_nodes(); ++i) {
    const int gi = sys.velocity_node_index(ids[i]);
    if (gi >= 0) v += phi[i] * Vec2(u[2 * gi], u[2 * gi + 1]);
  }
  return v;
}

double evaluate_pressure_at(const CurvedMesh& mesh, const FeSystem& sys,
                            const Eigen::VectorXd& p, const PointLocator::Hit& hit) {
  (void)mesh;
  const RefElement& pref = ref_element(sys.pressure_degree());
  Eigen::VectorXd phi;
  pref.eval(hit.xi, hit.eta, phi);
  double v = 0.0;
  const auto& pdofs = sys.pressure_element_dofs(hit.elem);
  for (int i = 0; i < pref.num_nodes(); ++i) v += phi[i] * p[pdofs[i]];
  return v;
}

InterfacePolyline::InterfacePolyline(const CurvedMesh& mesh, const FeSystem& sys, int per_edge) {
  (void)sys;
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  Eigen::VectorXd phi;
  for (std::size_t e = 0; e < mesh.interface_edges.size(); ++e) {
    const auto& ids = mesh.interface_edges[e];
    for (int s = 0; s < per_edge; ++s) {
      const double t = double(s) / per_edge;
      edge.eval(t, phi);
      Vec2 x = Vec2::Zero();
      for (int i = 0; i <= k; ++i) x += phi[i] * mesh.nodes[ids[i]];
      points_.push_back(x);
      edge_.push_back(static_cast<int>(e));
      t_.push_back(t);
    }
  }
}

InterfacePolyline::Foot InterfacePolyline::closest(const Vec2& x) const {
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = (points_[i] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {points_[best], edge_[best], t_[best], std::sqrt(best_d)};
}

Vec2 InterfacePolyline::evaluate(const CurvedMesh& mesh, const FeSystem& sys,
                                 const Eigen::VectorXd& v, int edge_id, double t) const {
  const int k = mesh.order;
  Eigen::VectorXd phi;
  ref_edge(k).eval(t, phi);
  Vec2 out = Vec2::Zero();
  const auto& ids = mesh.interface_edges[edge_id];
  for (int i = 0; i <= k; ++i) {
    const int gi = sys.interface_index(ids[i]);
    out += phi[i] * Vec2(v[2 * gi], v[2 * gi + 1]);
  }
  return out;
}

double interface_hausdorff(const CurvedMesh& mesh, const InterfaceDescriptor& desc,
                           int per_edge) {
  const int k = mesh.order;
  const RefEdge& edge = ref_edge(k);
  Eigen::VectorXd phi;
  std::vector<Vec2> samples;
  double d_mesh_to_curve = 0.0;
  for (const auto& ids : mesh.interface_edges) {
    for (int s = 0; s <= per_edge; ++s) {
      const double t = double(s) / per_edge;
      edge.eval(t, phi);
      Vec2 x = Vec2::Zero();
      for (int i = 0; i <= k; ++i) x += phi[i] * mesh.nodes[ids[i]];
      samples.push_back(x);
      d_mesh_to_curve = std::max(d_mesh_to_curve, std::abs(signed_distance(x, desc)));
    }
  }
  // Reverse direction: distance from dense curve points to the sampled
  // polyline, measured against segments so the sampling itself does not
  // pollute the rate.
  auto segment_distance = [](const Vec2& x, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(x - a) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - x).norm();
  };
  double d_curve_to_mesh = 0.0;
  const int n_samples = static_cast<int>(samples.size());
  const int n_curve = 4 * n_samples;
  int cursor = 0;
  {
    // Both loops run around the curve in order, so the nearest sample index
    // marches monotonically; keep a cursor instead of scanning.
    double best = 1e300;
    for (int s = 0; s < n_samples; ++s) {
      const double d = (samples[s] - desc.point(0.0)).squaredNorm();
      if (d < best) {
        best = d;
        cursor = s;
      }
    }
  }
  for (int i = 0; i < n_curve; ++i) {
    const Vec2 x = desc.point(2.0 * M_PI * i / n_curve);
    auto sq = [&](int s) { return (samples[(s % n_samples + n_samples) % n_samples] - x).squaredNorm(); };
    while (sq(cursor + 1) < sq(cursor)) ++cursor;
    while (sq(cursor - 1) < sq(cursor)) --cursor;
    cursor = (cursor % n_samples + n_samples) % n_samples;
    double dist = 1e300;
    for (int s = cursor - 3; s <= cursor + 3; ++s) {
      const Vec2& a = samples[(s % n_samples + n_samples) % n_samples];
      const Vec2& b = samples[((s + 1) % n_samples + n_samples) % n_samples];
      if ((b - a).squaredNorm() < 1e-30) continue;
      dist = std::min(dist, segment_distance(x, a, b));
    }
    d_curve_to_mesh = std::max(d_curve_to_mesh, dist);
  }
  return std::max(d_mesh_to_curve, d_curve_to_mesh);
}

Eigen::VectorXd solve_interface_curvature(const CurvedMesh& mesh, const FeSystem& sys) {
  const InterfaceOperators ops = assemble_interface(mesh, sys);
  const Eigen::VectorXd rhs = ops.stiffness * sys.interface_positions(mesh);
  Eigen::SimplicialLDLT<SparseMat> ldlt(ops.mass);
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("interface mass matrix factorization failed");
  return ldlt.solve(rhs);
}

ErrorRecord theorem_errors_reference(const StateSnapshot& coarse, const FeSystem& coarse_sys,
                                     const StateSnapshot& ref, const FeSystem& ref_sys,
                                     double h, double tau) {
  const CurvedMesh& cmesh = coarse.mesh;
  const PointLocator locator(ref.mesh);
  const InterfacePolyline ref_polyline(ref.mesh, ref_sys, 64);

  ErrorRecord rec;
  rec.h = h;
  rec.tau = tau;
  rec.source = "reference_run";

  // Velocity comparison interpolated at coarse node positions.
  const Eigen::VectorXd u_cmp =
      interpolate_velocity(cmesh, coarse_sys, [&](const Vec2& x) {
        const auto hit = locator.locate(x);
        if (!hit) throw ReferenceMismatch("coarse node not found in reference mesh");
        return evaluate_velocity_at(ref.mesh, ref_sys, ref.u, *hit);
      });
  rec.u_h1 = velocity_norms(cmesh, coarse_sys, coarse.u - u_cmp).h1();

  // Pressure: respect the phase of each broken dof; points caught on the
  // wrong side of the reference interface are reflected across it.
  const Eigen::VectorXd p_cmp =
      interpolate_pressure(cmesh, coarse_sys, [&](const Vec2& x, Phase ph) {
        auto hit = locator.locate(x, std::nullopt);
        if (!hit) throw ReferenceMismatch("coarse pressure node not found in reference mesh");
        if (ref.mesh.elements[hit->elem].phase != ph) {
          const auto foot = ref_polyline.closest(x);
          if (foot.dist > 0.5 * h)
            throw ReferenceMismatch("reference interface deviates beyond the projection tube");
          const Vec2 mirrored = 2.0 * foot.point - x;
          hit = locator.locate(mirrored, ph);
          if (!hit) throw ReferenceMismatch("cannot resolve pressure phase near the interface");
        }
        return evaluate_pressure_at(ref.mesh, ref_sys, ref.p, *hit);
      });
  rec.p_l2 = pressure_l2(cmesh, coarse_sys, coarse.p - p_cmp);

  // Interface position error against the dense reference polyline.
  const auto& cycle = coarse_sys.interface_cycle();
  Eigen::VectorXd ex(coarse_sys.num_interface_dofs());
  Eigen::VectorXd kappa_cmp(coarse_sys.num_interface_dofs());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vec2& x = cmesh.nodes[cycle[i]];
    const auto foot = ref_polyline.closest(x);
    ex[2 * i] = x.x() - foot.point.x();
    ex[2 * i + 1] = x.y() - foot.point.y();
    const Vec2 kv = ref_polyline.evaluate(ref.mesh, ref_sys, ref.kappa, foot.edge, foot.t);
    kappa_cmp[2 * i] = kv.x();
    kappa_cmp[2 * i + 1] = kv.y();
  }
  rec.x_h1 = interface_norms(cmesh, coarse_sys, ex).h1();
  rec.kappa_l2 = interface_norms(cmesh, coarse_sys, coarse.kappa - kappa_cmp).l2;

  // Difference of the phase-mean pressure jumps.
  const PhaseAreas ca = phase_areas(cmesh);
  const double cjump = pressure_integral(cmesh, coarse_sys, coarse.p, Phase::minus) / ca.minus -
                       pressure_integral(cmesh, coarse_sys, coarse.p, Phase::plus) / ca.plus;
  const PhaseAreas ra = phase_areas(ref.mesh);
  const double rjump = pressure_integral(ref.mesh, ref_sys, ref.p, Phase::minus) / ra.minus -
                       pressure_integral(ref.mesh, ref_sys, ref.p, Phase::plus) / ra.plus;
  rec.pressure_jump = std::abs(cjump - rjump);
  return rec;
}

}  // namespace stokes2p
