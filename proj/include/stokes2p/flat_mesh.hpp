#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "stokes2p/geometry.hpp"

namespace stokes2p {

enum class Phase : std::uint8_t { minus, plus };

struct Rect {
  double xmin, xmax, ymin, ymax;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
};

struct FlatTriangle {
  std::array<int, 3> v;  // counterclockwise vertex ids
  Phase phase;
};

// An interface edge together with its two incident triangles.
struct InterfaceEdge {
  int v0, v1;        // endpoints, ordered along the interface cycle
  int tri_minus;     // incident triangle on the interior side
  int tri_plus;      // incident triangle on the exterior side
};

// Straight-edged triangulation of the rectangle, fitted to the interface:
// the interface is a closed cycle of element edges whose vertices lie
// exactly on the curve, and triangles carry the phase they belong to.
struct FlatFittedMesh {
  std::vector<Vec2> vertices;
  std::vector<FlatTriangle> triangles;
  std::vector<InterfaceEdge> interface_edges;  // single closed cycle, CCW
  std::set<int> boundary_vertices;
  Rect domain{};

  double max_edge_length() const;
  double min_triangle_area() const;
};

// Builds the fitted triangulation: rings scaled from the interface collapse
// to a small fan at the curve's center, rings outside blend to the rectangle
// boundary; angular resolution coarsens inward and refines outward so that
// element size stays near target_h throughout.
FlatFittedMesh generate_fitted_mesh(const Rect& domain, const InterfaceDescriptor& desc,
                                    double target_h);

// Uniform right-triangle mesh of a rectangle with no interface (all plus).
// Used for tests and pure-bulk problems.
FlatFittedMesh structured_rect_mesh(const Rect& domain, int nx, int ny);

}  // namespace stokes2p
