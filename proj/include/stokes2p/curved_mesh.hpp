#pragma once

#include <array>
#include <set>
#include <vector>

#include "stokes2p/flat_mesh.hpp"
#include "stokes2p/ref_element.hpp"

namespace stokes2p {

struct CurvedElement {
  std::vector<int> nodes;  // local ordering of RefElement
  Phase phase;
};

struct ShapeMetrics {
  double kappa = 0.0;       // parametrization norms, diameter-normalized
  double kappa_star = 0.0;  // highest-order parametrization seminorm
  double min_scaled_jacobian = 0.0;
};

// Order-k iso-parametric triangulation. Nodes are Lagrange nodes of the
// element maps: flat vertices first, then edge nodes (Gauss-Lobatto along
// each edge), then cell-interior nodes. Interface edges are curved (their
// nodes projected onto the exact curve at construction time); every other
// edge is straight until the mesh moves.
struct CurvedMesh {
  int order = 2;
  std::vector<Vec2> nodes;
  std::vector<CurvedElement> elements;
  std::vector<std::vector<int>> interface_edges;      // k+1 node ids, along the cycle
  std::vector<std::pair<int, int>> interface_elems;   // (minus, plus) element per edge
  std::set<int> boundary_nodes;
  Rect domain{};

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
};

// Shared reference element cache (one per polynomial degree).
const RefElement& ref_element(int degree);
const RefEdge& ref_edge(int degree);

// Curves the flat fitted mesh to order k: interface edge nodes are the
// closest-point projections of the straight edge nodes onto the curve, and
// interior nodes of interface-adjacent elements follow a transfinite blend
// of the curved edge. Throws JacobianFlip if curving inverts an element.
CurvedMesh lenoir_curve(const FlatFittedMesh& flat, const InterfaceDescriptor& desc, int k);

// Moves every node by its displacement; topology is unchanged.
// Throws JacobianFlip if any element map loses Jacobian positivity.
CurvedMesh displace(const CurvedMesh& mesh, const std::vector<Vec2>& d);

ShapeMetrics shape_metrics(const CurvedMesh& mesh);

// Geometry evaluation of one element map at a reference point.
struct MapSample {
  Vec2 x;
  Eigen::Matrix2d jacobian;
  double det;
};
MapSample evaluate_map(const CurvedMesh& mesh, int elem, double xi, double eta);

// The two phase areas, integrated with the iso-parametric maps.
struct PhaseAreas {
  double minus = 0.0;
  double plus = 0.0;
};
PhaseAreas phase_areas(const CurvedMesh& mesh);

// Length of the discrete interface (sum over curved interface edges).
double interface_length(const CurvedMesh& mesh);

}  // namespace stokes2p
