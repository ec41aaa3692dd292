#include "stokes2p/flat_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace stokes2p {

double FlatFittedMesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e)
      m = std::max(m, (vertices[t.v[e]] - vertices[t.v[(e + 1) % 3]]).norm());
  return m;
}

double FlatFittedMesh::min_triangle_area() const {
  double m = std::numeric_limits<double>::max();
  for (const auto& t : triangles) {
    const Vec2 a = vertices[t.v[1]] - vertices[t.v[0]];
    const Vec2 b = vertices[t.v[2]] - vertices[t.v[0]];
    m = std::min(m, 0.5 * (a.x() * b.y() - a.y() * b.x()));
  }
  return m;
}

namespace {

struct Ring {
  std::vector<int> ids;
  std::vector<double> params;  // curve parameter of the generating ray
  std::vector<double> angles;  // polar angle about the curve center, increasing
};

double circ_delta(double from, double to) {
  double d = to - from;
  const double two_pi = 2.0 * M_PI;
  while (d <= 0.0) d += two_pi;
  while (d > two_pi) d -= two_pi;
  return d;
}

class Mesher {
 public:
  Mesher(const Rect& domain, const InterfaceDescriptor& desc, double h)
      : domain_(domain), desc_(desc), h_(h), center_(desc.center()) {}

  FlatFittedMesh build();

 private:
  int add_vertex(const Vec2& p) {
    mesh_.vertices.push_back(p);
    return static_cast<int>(mesh_.vertices.size()) - 1;
  }

  void add_triangle(int a, int b, int c, Phase phase) {
    mesh_.triangles.push_back({{a, b, c}, phase});
  }

  Ring make_ring(const std::vector<double>& params, auto&& position) {
    Ring ring;
    ring.params = params;
    ring.ids.reserve(params.size());
    ring.angles.reserve(params.size());
    for (double t : params) {
      const Vec2 p = position(t);
      ring.ids.push_back(add_vertex(p));
      ring.angles.push_back(std::atan2(p.y() - center_.y(), p.x() - center_.x()));
    }
    return ring;
  }

  // Triangulates the annular strip between an inner and an outer ring by an
  // angular sweep; rings may have different vertex counts.
  void zipper(const Ring& inner, const Ring& outer, Phase phase);

  std::vector<double> equidistributed_params(int n) const;
  Vec2 boundary_hit(double t) const;  // ray through gamma(t) meets the rectangle

  void build_interior(const Ring& interface_ring);
  void build_exterior(const Ring& interface_ring);
  void collect_interface_edges(const Ring& interface_ring);

  Rect domain_;
  const InterfaceDescriptor& desc_;
  double h_;
  Vec2 center_;
  FlatFittedMesh mesh_;
};

std::vector<double> Mesher::equidistributed_params(int n) const {
  // Invert the cumulative arclength on a dense grid.
  const int dense = 1 << 14;
  std::vector<double> s(dense + 1, 0.0);
  for (int i = 0; i < dense; ++i) {
    const double t = 2.0 * M_PI * (i + 0.5) / dense;
    s[i + 1] = s[i] + desc_.derivative(t).norm() * (2.0 * M_PI / dense);
  }
  const double total = s[dense];
  std::vector<double> params(n);
  int j = 0;
  for (int i = 0; i < n; ++i) {
    const double target = total * i / n;
    while (j < dense && s[j + 1] < target) ++j;
    const double f = (target - s[j]) / (s[j + 1] - s[j]);
    params[i] = 2.0 * M_PI * (j + f) / dense;
  }
  return params;
}

Vec2 Mesher::boundary_hit(double t) const {
  const Vec2 g = desc_.point(t);
  const Vec2 d = (g - center_).normalized();
  double best = std::numeric_limits<double>::max();
  int side = -1;  // 0 left, 1 right, 2 bottom, 3 top
  if (d.x() < 0.0 && (domain_.xmin - center_.x()) / d.x() < best) {
    best = (domain_.xmin - center_.x()) / d.x();
    side = 0;
  }
  if (d.x() > 0.0 && (domain_.xmax - center_.x()) / d.x() < best) {
    best = (domain_.xmax - center_.x()) / d.x();
    side = 1;
  }
  if (d.y() < 0.0 && (domain_.ymin - center_.y()) / d.y() < best) {
    best = (domain_.ymin - center_.y()) / d.y();
    side = 2;
  }
  if (d.y() > 0.0 && (domain_.ymax - center_.y()) / d.y() < best) {
    best = (domain_.ymax - center_.y()) / d.y();
    side = 3;
  }
  Vec2 p = center_ + best * d;
  // Pin the hit coordinate exactly onto the box.
  if (side == 0) p.x() = domain_.xmin;
  if (side == 1) p.x() = domain_.xmax;
  if (side == 2) p.y() = domain_.ymin;
  if (side == 3) p.y() = domain_.ymax;
  p.x() = std::clamp(p.x(), domain_.xmin, domain_.xmax);
  p.y() = std::clamp(p.y(), domain_.ymin, domain_.ymax);
  return p;
}

void Mesher::zipper(const Ring& inner, const Ring& outer, Phase phase) {
  const int ni = static_cast<int>(inner.ids.size());
  const int no = static_cast<int>(outer.ids.size());
  // Align the sweep start: outer vertex closest in angle to inner[0].
  int j0 = 0;
  double best = std::numeric_limits<double>::max();
  for (int j = 0; j < no; ++j) {
    double d = std::abs(std::remainder(outer.angles[j] - inner.angles[0], 2.0 * M_PI));
    if (d < best) {
      best = d;
      j0 = j;
    }
  }
  int i = 0, j = j0;
  int ci = 0, cj = 0;
  double a_in = 0.0;
  double a_out = std::remainder(outer.angles[j0] - inner.angles[0], 2.0 * M_PI);
  while (ci < ni || cj < no) {
    const double next_in =
        ci < ni ? a_in + circ_delta(inner.angles[i], inner.angles[(i + 1) % ni])
                : std::numeric_limits<double>::max();
    const double next_out =
        cj < no ? a_out + circ_delta(outer.angles[j], outer.angles[(j + 1) % no])
                : std::numeric_limits<double>::max();
    if (next_out <= next_in) {
      add_triangle(outer.ids[j], outer.ids[(j + 1) % no], inner.ids[i], phase);
      j = (j + 1) % no;
      ++cj;
      a_out = next_out;
    } else {
      add_triangle(inner.ids[(i + 1) % ni], inner.ids[i], outer.ids[j], phase);
      i = (i + 1) % ni;
      ++ci;
      a_in = next_in;
    }
  }
}

void Mesher::build_interior(const Ring& interface_ring) {
  Ring cur = interface_ring;
  double rho = 1.0;
  const double perim = desc_.perimeter();
  while (true) {
    const int m = static_cast<int>(cur.ids.size());
    double r_mean = 0.0;
    for (int id : cur.ids) r_mean += (mesh_.vertices[id] - center_).norm();
    r_mean /= m;

    if (m <= 14 && r_mean <= 1.8 * h_) {
      const int cid = add_vertex(center_);
      for (int i = 0; i < m; ++i)
        add_triangle(cid, cur.ids[i], cur.ids[(i + 1) % m], Phase::minus);
      return;
    }

    const double spacing = rho * perim / m;
    std::vector<double> params = cur.params;
    if ((spacing < 0.72 * h_ || r_mean <= 1.8 * h_) && m >= 10) {
      std::vector<double> coarse;
      for (int i = 0; i < m; i += 2) coarse.push_back(params[i]);
      params = std::move(coarse);
    }
    const double spacing_next = rho * perim / params.size();
    double dr = std::clamp(spacing_next, 0.55 * h_, h_);
    if (r_mean - dr < 0.8 * dr) dr = 0.5 * r_mean;

    const double rho_next = rho * (1.0 - dr / r_mean);
    Ring next = make_ring(
        params, [&](double t) { return (center_ + rho_next * (desc_.point(t) - center_)).eval(); });
    zipper(next, cur, Phase::minus);
    cur = std::move(next);
    rho = rho_next;
  }
}

void Mesher::build_exterior(const Ring& interface_ring) {
  // Longest blend distance fixes the number of outward rings.
  double max_gap = 0.0;
  for (int i = 0; i < 2048; ++i) {
    const double t = 2.0 * M_PI * i / 2048;
    max_gap = std::max(max_gap, (boundary_hit(t) - desc_.point(t)).norm());
  }
  const int n_rings = std::max(1, static_cast<int>(std::llround(max_gap / h_)));

  Ring cur = interface_ring;
  std::vector<double> params = interface_ring.params;
  for (int j = 1; j <= n_rings; ++j) {
    const double s = double(j) / n_rings;
    auto position = [&](double t) {
      return ((1.0 - s) * desc_.point(t) + s * boundary_hit(t)).eval();
    };
    // Refine angularly while consecutive spacing exceeds the budget.
    for (int pass = 0; pass < 3; ++pass) {
      double worst = 0.0;
      const int m = static_cast<int>(params.size());
      for (int i = 0; i < m; ++i) {
        const Vec2 a = position(params[i]);
        const Vec2 b = position(params[(i + 1) % m]);
        worst = std::max(worst, (b - a).norm());
      }
      if (worst <= 1.45 * h_) break;
      std::vector<double> fine;
      fine.reserve(2 * params.size());
      for (int i = 0; i < m; ++i) {
        const double t0 = params[i];
        const double t1 = params[(i + 1) % m];
        fine.push_back(t0);
        fine.push_back(t0 + 0.5 * circ_delta(t0, t1));
      }
      params = std::move(fine);
    }

    Ring next = make_ring(params, position);
    if (j == n_rings) {
      // Snap the nearest boundary vertex onto each rectangle corner so the
      // outermost ring traces the rectangle exactly.
      const Vec2 corners[4] = {{domain_.xmin, domain_.ymin},
                               {domain_.xmax, domain_.ymin},
                               {domain_.xmax, domain_.ymax},
                               {domain_.xmin, domain_.ymax}};
      for (const Vec2& corner : corners) {
        const double ca = std::atan2(corner.y() - center_.y(), corner.x() - center_.x());
        int nearest = 0;
        double best = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < next.ids.size(); ++i) {
          const double d = std::abs(std::remainder(next.angles[i] - ca, 2.0 * M_PI));
          if (d < best) {
            best = d;
            nearest = static_cast<int>(i);
          }
        }
        mesh_.vertices[next.ids[nearest]] = corner;
        next.angles[nearest] = ca;
      }
      for (int id : next.ids) mesh_.boundary_vertices.insert(id);
    }
    zipper(cur, next, Phase::plus);
    cur = std::move(next);
  }
}

void Mesher::collect_interface_edges(const Ring& interface_ring) {
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (std::size_t k = 0; k < mesh_.triangles.size(); ++k) {
    const auto& t = mesh_.triangles[k];
    for (int e = 0; e < 3; ++e) {
      const int a = t.v[e], b = t.v[(e + 1) % 3];
      edge_tris[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(k));
    }
  }
  const int m = static_cast<int>(interface_ring.ids.size());
  for (int i = 0; i < m; ++i) {
    const int a = interface_ring.ids[i];
    const int b = interface_ring.ids[(i + 1) % m];
    const auto& tris = edge_tris.at({std::min(a, b), std::max(a, b)});
    if (tris.size() != 2)
      throw std::logic_error("interface edge is not shared by exactly two triangles");
    InterfaceEdge edge{a, b, -1, -1};
    for (int tid : tris) {
      if (mesh_.triangles[tid].phase == Phase::minus)
        edge.tri_minus = tid;
      else
        edge.tri_plus = tid;
    }
    if (edge.tri_minus < 0 || edge.tri_plus < 0)
      throw std::logic_error("interface edge does not separate the two phases");
    mesh_.interface_edges.push_back(edge);
  }
}

FlatFittedMesh Mesher::build() {
  mesh_.domain = domain_;

  if (!(center_.x() > domain_.xmin && center_.x() < domain_.xmax &&
        center_.y() > domain_.ymin && center_.y() < domain_.ymax))
    throw ClearanceTooSmall("interface center lies outside the domain rectangle");

  double min_radius = std::numeric_limits<double>::max();
  double min_clear = std::numeric_limits<double>::max();
  for (int i = 0; i < 4096; ++i) {
    const double t = 2.0 * M_PI * i / 4096;
    const Vec2 p = desc_.point(t);
    min_radius = std::min(min_radius, (p - center_).norm());
    const double clear = std::min(std::min(p.x() - domain_.xmin, domain_.xmax - p.x()),
                                  std::min(p.y() - domain_.ymin, domain_.ymax - p.y()));
    min_clear = std::min(min_clear, clear);
  }
  if (min_radius <= 0.0) throw NotStarShaped("interface radius vanishes about its center");
  if (min_clear < 2.0 * h_)
    throw ClearanceTooSmall("interface clearance to the boundary is below 2*target_h");

  const int n_interface = std::max(12, static_cast<int>(std::llround(desc_.perimeter() / h_)));
  Ring interface_ring =
      make_ring(equidistributed_params(n_interface), [&](double t) { return desc_.point(t); });

  build_interior(interface_ring);
  build_exterior(interface_ring);
  collect_interface_edges(interface_ring);

  for (const auto& t : mesh_.triangles) {
    const Vec2 a = mesh_.vertices[t.v[1]] - mesh_.vertices[t.v[0]];
    const Vec2 b = mesh_.vertices[t.v[2]] - mesh_.vertices[t.v[0]];
    if (a.x() * b.y() - a.y() * b.x() <= 0.0)
      throw std::logic_error("mesher produced a non-counterclockwise triangle");
  }
  return std::move(mesh_);
}

}  // namespace

FlatFittedMesh generate_fitted_mesh(const Rect& domain, const InterfaceDescriptor& desc,
                                    double target_h) {
  if (!(target_h > 0.0)) throw ValidationError("target_h must be positive");
  return Mesher(domain, desc, target_h).build();
}

FlatFittedMesh structured_rect_mesh(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1) throw ValidationError("structured_rect_mesh: nx, ny must be >= 1");
  FlatFittedMesh mesh;
  mesh.domain = domain;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(domain.xmin + i * dx, domain.ymin + j * dy);
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)}, Phase::plus});
      mesh.triangles.push_back({{vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)}, Phase::plus});
    }
  }
  for (int i = 0; i <= nx; ++i) {
    mesh.boundary_vertices.insert(vid(i, 0));
    mesh.boundary_vertices.insert(vid(i, ny));
  }
  for (int j = 0; j <= ny; ++j) {
    mesh.boundary_vertices.insert(vid(0, j));
    mesh.boundary_vertices.insert(vid(nx, j));
  }
  return mesh;
}

}  // namespace stokes2p
