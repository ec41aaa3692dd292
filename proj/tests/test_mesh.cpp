#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "stokes2p/diagnostics.hpp"
#include "stokes2p/mesh_io.hpp"
#include "stokes2p/norms.hpp"

using namespace stokes2p;

namespace {

const Rect kBox{-1.0, 1.0, -1.0, 1.0};

void check_flat_invariants(const FlatFittedMesh& mesh, const InterfaceDescriptor& desc,
                           double h) {
  // Orientation and positive areas.
  CHECK(mesh.min_triangle_area() > 0.0);
  // Max edge budget.
  CHECK(mesh.max_edge_length() <= 2.0 * h);
  CHECK(mesh.max_edge_length() >= 0.5 * h);
  // Interface vertices on the curve.
  for (const auto& e : mesh.interface_edges) {
    CHECK(std::abs(signed_distance(mesh.vertices[e.v0], desc)) <= 1e-10);
    CHECK(std::abs(signed_distance(mesh.vertices[e.v1], desc)) <= 1e-10);
  }
  // Interface edges form a single closed cycle.
  std::map<int, int> succ;
  for (const auto& e : mesh.interface_edges) {
    CHECK(succ.emplace(e.v0, e.v1).second);
  }
  int v = mesh.interface_edges.front().v0;
  for (std::size_t i = 0; i < mesh.interface_edges.size(); ++i) v = succ.at(v);
  CHECK(v == mesh.interface_edges.front().v0);
  // Each interface edge separates the phases; at most one interface edge
  // per triangle.
  std::map<int, int> edges_per_tri;
  for (const auto& e : mesh.interface_edges) {
    CHECK(mesh.triangles[e.tri_minus].phase == Phase::minus);
    CHECK(mesh.triangles[e.tri_plus].phase == Phase::plus);
    CHECK(++edges_per_tri[e.tri_minus] == 1);
    CHECK(++edges_per_tri[e.tri_plus] == 1);
  }
  // Phase partition: interior triangles are exactly the minus ones.
  // Check via the centroid's signed distance.
  for (const auto& t : mesh.triangles) {
    const Vec2 c = (mesh.vertices[t.v[0]] + mesh.vertices[t.v[1]] + mesh.vertices[t.v[2]]) / 3.0;
    if (t.phase == Phase::minus)
      CHECK(signed_distance(c, desc) < 0.0);
    else
      CHECK(signed_distance(c, desc) > 0.0);
  }
  // Boundary vertices lie on the rectangle.
  for (int id : mesh.boundary_vertices) {
    const Vec2& p = mesh.vertices[id];
    const double d = std::min({p.x() - mesh.domain.xmin, mesh.domain.xmax - p.x(),
                               p.y() - mesh.domain.ymin, mesh.domain.ymax - p.y()});
    CHECK(std::abs(d) < 1e-12);
  }
  // The four corners are vertices.
  for (const Vec2 corner : {Vec2(kBox.xmin, kBox.ymin), Vec2(kBox.xmax, kBox.ymin),
                            Vec2(kBox.xmax, kBox.ymax), Vec2(kBox.xmin, kBox.ymax)}) {
    bool found = false;
    for (int id : mesh.boundary_vertices)
      if ((mesh.vertices[id] - corner).norm() < 1e-12) found = true;
    CHECK(found);
  }
  // Mesh is conforming: every edge is shared by one or two triangles, and
  // boundary edges exactly line the rectangle.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t.v[e], b = t.v[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  double boundary_len = 0.0;
  for (const auto& [key, count] : edge_count) {
    CHECK(count <= 2);
    if (count == 1) boundary_len += (mesh.vertices[key.first] - mesh.vertices[key.second]).norm();
  }
  CHECK(boundary_len ==
        doctest::Approx(2.0 * (mesh.domain.width() + mesh.domain.height())).epsilon(1e-12));
  // Flat triangle areas tile the rectangle.
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.vertices[t.v[1]] - mesh.vertices[t.v[0]];
    const Vec2 b = mesh.vertices[t.v[2]] - mesh.vertices[t.v[0]];
    area += 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  CHECK(area == doctest::Approx(mesh.domain.area()).epsilon(1e-12));
}

}  // namespace

TEST_CASE("fitted mesh invariants hold for circle, ellipse and star") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const auto ellipse = InterfaceDescriptor::ellipse({0.0, 0.0}, 0.6, 0.4);
  const auto star = InterfaceDescriptor::star({0.05, 0.0}, 0.45, 0.15, 5);
  for (double h : {0.25, 0.125, 0.0625}) {
    check_flat_invariants(generate_fitted_mesh(kBox, circle, h), circle, h);
    check_flat_invariants(generate_fitted_mesh(kBox, ellipse, h), ellipse, h);
    if (h <= 0.125) check_flat_invariants(generate_fitted_mesh(kBox, star, h), star, h);
  }
}

TEST_CASE("interface edge count tracks the perimeter") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const auto coarse = generate_fitted_mesh(kBox, circle, 0.25);
  // ceil(2 pi R / h) = 13 edges requested on the cycle
  CHECK(std::abs(int(coarse.interface_edges.size()) - 13) <= 1);
  const auto fine = generate_fitted_mesh(kBox, circle, 0.125);
  const double ratio = double(fine.interface_edges.size()) / coarse.interface_edges.size();
  CHECK(ratio >= 1.8);
  CHECK(ratio <= 2.2);
}

TEST_CASE("clearance guard") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  CHECK_THROWS_AS((void)generate_fitted_mesh(kBox, circle, 0.3), ClearanceTooSmall);
  const auto big = InterfaceDescriptor::circle({0.0, 0.0}, 1.5);
  CHECK_THROWS_AS((void)generate_fitted_mesh(kBox, big, 0.05), ClearanceTooSmall);
}

TEST_CASE("curving projects interface nodes onto the curve") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const auto flat = generate_fitted_mesh(kBox, circle, 0.125);
  for (int k : {2, 3, 4}) {
    const CurvedMesh mesh = lenoir_curve(flat, circle, k);
    for (const auto& ids : mesh.interface_edges)
      for (int id : ids) CHECK(std::abs((mesh.nodes[id]).norm() - 0.5) <= 1e-10);
    // Conformity: shared nodes have identical ids; integrate 1 == |Omega|.
    const PhaseAreas areas = phase_areas(mesh);
    CHECK(areas.minus + areas.plus == doctest::Approx(kBox.area()).epsilon(1e-12));
  }
}

TEST_CASE("curving is local: non-interface elements stay affine") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const auto flat = generate_fitted_mesh(kBox, circle, 0.125);
  const int k = 3;
  const CurvedMesh mesh = lenoir_curve(flat, circle, k);
  std::set<int> interface_elems;
  for (const auto& [minus, plus] : mesh.interface_elems) {
    interface_elems.insert(minus);
    interface_elems.insert(plus);
  }
  const RefElement& ref = ref_element(k);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (interface_elems.count(e)) continue;
    const Vec2 v0 = mesh.nodes[mesh.elements[e].nodes[0]];
    const Vec2 v1 = mesh.nodes[mesh.elements[e].nodes[1]];
    const Vec2 v2 = mesh.nodes[mesh.elements[e].nodes[2]];
    for (int i = 0; i < ref.num_nodes(); ++i) {
      const RefNode& rn = ref.nodes()[i];
      const Vec2 affine = (1.0 - rn.xi - rn.eta) * v0 + rn.xi * v1 + rn.eta * v2;
      CHECK((mesh.nodes[mesh.elements[e].nodes[i]] - affine).norm() < 1e-13);
    }
  }
}

TEST_CASE("interface geometric error decays at order k+1") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  for (int k : {2, 3}) {
    std::vector<double> errs;
    for (double h : {0.2, 0.1, 0.05}) {
      const CurvedMesh mesh = lenoir_curve(generate_fitted_mesh(kBox, circle, h), circle, k);
      errs.push_back(interface_hausdorff(mesh, circle, 256));
    }
    const double r1 = std::log2(errs[0] / errs[1]);
    const double r2 = std::log2(errs[1] / errs[2]);
    CHECK(0.5 * (r1 + r2) >= k + 1 - 0.4);
  }
}

TEST_CASE("minus-phase area converges to the disc area at order k+1") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const double exact = M_PI * 0.25;
  for (int k : {2, 3}) {
    std::vector<double> errs;
    for (double h : {0.2, 0.1, 0.05}) {
      const CurvedMesh mesh = lenoir_curve(generate_fitted_mesh(kBox, circle, h), circle, k);
      errs.push_back(std::abs(phase_areas(mesh).minus - exact));
    }
    const double rate = 0.5 * std::log2(errs[0] / errs[2]);
    CHECK(rate >= k + 1 - 0.5);
  }
}

TEST_CASE("shape metrics are size-invariant and bounded across levels") {
  // Two single-triangle meshes of different scale report identical kappa.
  auto single = [](double s) {
    FlatFittedMesh mesh;
    mesh.domain = {0.0, s, 0.0, s};
    mesh.vertices = {{0.0, 0.0}, {s, 0.0}, {0.5 * s, 0.5 * std::sqrt(3.0) * s}};
    mesh.triangles.push_back({{0, 1, 2}, Phase::plus});
    mesh.boundary_vertices = {0, 1, 2};
    return mesh;
  };
  const auto dummy = InterfaceDescriptor::circle({0.25, 0.25}, 0.1);
  const ShapeMetrics m1 = shape_metrics(lenoir_curve(single(1.0), dummy, 2));
  const ShapeMetrics m2 = shape_metrics(lenoir_curve(single(10.0), dummy, 2));
  CHECK(m1.kappa == doctest::Approx(m2.kappa).epsilon(1e-12));
  CHECK(m1.kappa_star == doctest::Approx(m2.kappa_star).epsilon(1e-12));

  // Bounded quality across refinement of the curved circle mesh.
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const ShapeMetrics a =
      shape_metrics(lenoir_curve(generate_fitted_mesh(kBox, circle, 0.1), circle, 2));
  const ShapeMetrics b =
      shape_metrics(lenoir_curve(generate_fitted_mesh(kBox, circle, 0.05), circle, 2));
  CHECK(b.kappa <= 1.5 * a.kappa);
  CHECK(a.kappa <= 1.5 * b.kappa);
  CHECK(b.kappa_star <= 1.5 * a.kappa_star);
  CHECK(a.kappa_star <= 1.5 * b.kappa_star);
  MESSAGE("kappa: ", a.kappa, " -> ", b.kappa, ", kappa*: ", a.kappa_star, " -> ",
          b.kappa_star);
}

TEST_CASE("sheared element reports a low scaled Jacobian") {
  FlatFittedMesh mesh;
  mesh.domain = {0.0, 1.0, 0.0, 1.0};
  const double h = 1.0;
  // Equilateral triangle with the apex pushed 90% of the way to the base.
  const double height = 0.5 * std::sqrt(3.0) * h;
  mesh.vertices = {{0.0, 0.0}, {h, 0.0}, {0.5 * h, 0.1 * height}};
  mesh.triangles.push_back({{0, 1, 2}, Phase::plus});
  mesh.boundary_vertices = {0, 1, 2};
  const auto dummy = InterfaceDescriptor::circle({0.25, 0.25}, 0.05);
  const ShapeMetrics m = shape_metrics(lenoir_curve(mesh, dummy, 2));
  CHECK(m.min_scaled_jacobian < 0.2);
  CHECK(m.min_scaled_jacobian > 0.0);
}

TEST_CASE("displace: identity, rigid translation, and flip detection") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const CurvedMesh mesh = lenoir_curve(generate_fitted_mesh(kBox, circle, 0.2), circle, 2);

  // Zero displacement leaves the mesh identical.
  const CurvedMesh same = displace(mesh, std::vector<Vec2>(mesh.num_nodes(), Vec2::Zero()));
  for (int i = 0; i < mesh.num_nodes(); ++i) CHECK((same.nodes[i] - mesh.nodes[i]).norm() == 0.0);

  // Rigid translation: Jacobians unchanged to machine precision.
  const CurvedMesh moved = displace(mesh, std::vector<Vec2>(mesh.num_nodes(), Vec2(0.3, -0.7)));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const MapSample s0 = evaluate_map(mesh, e, 0.3, 0.3);
    const MapSample s1 = evaluate_map(moved, e, 0.3, 0.3);
    CHECK(std::abs(s0.det - s1.det) <= 1e-14 * std::abs(s0.det));
  }

  // Collapsing an element must throw.
  std::vector<Vec2> bad(mesh.num_nodes(), Vec2::Zero());
  const auto& elem = mesh.elements[0].nodes;
  bad[elem[2]] = mesh.nodes[elem[0]] - mesh.nodes[elem[2]] +
                 0.5 * (mesh.nodes[elem[1]] - mesh.nodes[elem[0]]);
  CHECK_THROWS_AS((void)displace(mesh, bad), JacobianFlip);
}

TEST_CASE("mesh export/import round-trips byte-identically") {
  const auto star = InterfaceDescriptor::star({0.0, 0.1}, 0.4, 0.1, 3);
  const CurvedMesh mesh = lenoir_curve(generate_fitted_mesh(kBox, star, 0.15), star, 3);
  const std::string text = export_mesh(mesh);
  const CurvedMesh back = import_mesh(text);
  CHECK(export_mesh(back) == text);
  CHECK(back.order == mesh.order);
  CHECK(back.num_elements() == mesh.num_elements());
  CHECK(back.interface_edges.size() == mesh.interface_edges.size());
  CHECK(back.interface_elems == mesh.interface_elems);
  CHECK(back.boundary_nodes == mesh.boundary_nodes);
}

TEST_CASE("import validates the fitted-mesh contract") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const CurvedMesh mesh = lenoir_curve(generate_fitted_mesh(kBox, circle, 0.2), circle, 2);
  std::string text = export_mesh(mesh);
  // Flip one phase tag so an interface edge no longer separates the phases.
  const auto pos = text.find(" -\n");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, " +\n");
  CHECK_THROWS_AS((void)import_mesh(text), ParseError);
}

TEST_CASE("structured rectangle mesh covers the box") {
  const FlatFittedMesh mesh = structured_rect_mesh({0.0, 2.0, 0.0, 1.0}, 4, 2);
  CHECK(mesh.triangles.size() == 16);
  CHECK(mesh.min_triangle_area() > 0.0);
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.vertices[t.v[1]] - mesh.vertices[t.v[0]];
    const Vec2 b = mesh.vertices[t.v[2]] - mesh.vertices[t.v[0]];
    area += 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  CHECK(area == doctest::Approx(2.0).epsilon(1e-14));
}
