#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "stokes2p/curved_mesh.hpp"

namespace stokes2p {

using SparseMat = Eigen::SparseMatrix<double>;

// Degree-of-freedom maps for the velocity / pressure / interface trio on a
// fixed mesh topology. Node positions are free to move (the maps survive
// displace), so one FeSystem serves a whole time integration.
//
// Velocity: vector P^k, continuous, zero on the outer boundary (those nodes
// carry no dof). Pressure: scalar P^{k-1}, continuous within each phase,
// with duplicated dofs on interface nodes; a single scalar mean constraint
// is applied at solve time. Interface: vector P^k on the interface cycle.
class FeSystem {
 public:
  FeSystem(const CurvedMesh& mesh, bool constrain_boundary = true);

  int order() const { return order_; }
  int pressure_degree() const { return order_ - 1; }
  bool boundary_constrained() const { return boundary_constrained_; }

  // Velocity: scalar node index or -1 for constrained nodes. The vector dof
  // of (node, component) is 2*index + component.
  int velocity_node_index(int node) const { return u_node_index_[node]; }
  int num_velocity_dofs() const { return 2 * n_u_nodes_; }
  int num_velocity_nodes() const { return n_u_nodes_; }

  // Pressure: per-element local-to-global map (local ordering of the
  // degree k-1 reference element).
  const std::vector<int>& pressure_element_dofs(int elem) const { return p_elem_dofs_[elem]; }
  int num_pressure_dofs() const { return n_p_; }
  Phase pressure_dof_phase(int dof) const { return p_dof_phase_[dof]; }
  // Physical positions of pressure dofs on the current mesh geometry.
  std::vector<Vec2> pressure_dof_positions(const CurvedMesh& mesh) const;

  // Interface: nodes along the cycle; dof of (cycle position, component) is
  // 2*position + component.
  const std::vector<int>& interface_cycle() const { return interface_cycle_; }
  int interface_index(int node) const { return node_to_interface_[node]; }
  int num_interface_dofs() const { return 2 * static_cast<int>(interface_cycle_.size()); }

  // Interface node positions flattened as a dof vector (x0,y0,x1,y1,...).
  Eigen::VectorXd interface_positions(const CurvedMesh& mesh) const;

 private:
  int order_;
  bool boundary_constrained_;
  std::vector<int> u_node_index_;
  int n_u_nodes_ = 0;
  std::vector<std::vector<int>> p_elem_dofs_;
  std::vector<Phase> p_dof_phase_;
  int n_p_ = 0;
  std::vector<int> interface_cycle_;
  std::vector<int> node_to_interface_;
};

// Nodal interpolations. The resulting finite element function matches the
// callable at every free node of the target space.
Eigen::VectorXd interpolate_scalar(const CurvedMesh& mesh,
                                   const std::function<double(const Vec2&)>& f);
Eigen::VectorXd interpolate_velocity(const CurvedMesh& mesh, const FeSystem& sys,
                                     const std::function<Vec2(const Vec2&)>& f);
Eigen::VectorXd interpolate_pressure(const CurvedMesh& mesh, const FeSystem& sys,
                                     const std::function<double(const Vec2&, Phase)>& f);
Eigen::VectorXd interpolate_interface(const CurvedMesh& mesh, const FeSystem& sys,
                                      const std::function<Vec2(const Vec2&)>& f);

// Matrix-market export of a sparse operator, for debugging.
void write_matrix_market(const SparseMat& m, const std::string& path);

}  // namespace stokes2p
