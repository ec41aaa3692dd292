#pragma once

#include "stokes2p/fe_space.hpp"

namespace stokes2p {

// Viscous form: A[(i,a),(j,b)] = int 2 nu D(phi_i e_a) : D(phi_j e_b) with
// D the symmetric gradient and nu piecewise constant by element phase.
SparseMat assemble_viscous(const CurvedMesh& mesh, const FeSystem& sys, double nu_minus,
                           double nu_plus);

// Vector mass on the velocity space (used for dual-norm evaluations).
SparseMat assemble_velocity_mass(const CurvedMesh& mesh, const FeSystem& sys);

// Divergence form: B[i,(j,b)] = int psi_i d_b phi_j, pressure rows.
SparseMat assemble_divergence(const CurvedMesh& mesh, const FeSystem& sys);

// Mean vector c_i = int psi_i, the single scalar constraint row.
Eigen::VectorXd assemble_pressure_mean(const CurvedMesh& mesh, const FeSystem& sys);

// Interface operators on the curved edge cycle. mass and stiffness act on
// interface dofs; the *_trace variants carry the same integrals with
// velocity-dof columns (the trace of a bulk P^k function on an interface
// edge is the edge's own P^k function).
struct InterfaceOperators {
  SparseMat mass;             // n_k x n_k
  SparseMat stiffness;        // n_k x n_k
  SparseMat mass_trace;       // n_k x n_u
  SparseMat stiffness_trace;  // n_k x n_u
};
InterfaceOperators assemble_interface(const CurvedMesh& mesh, const FeSystem& sys);

// Local curve integrals for one order-k edge through the given k+1 points:
// mass m_qr = int l_q l_r |x'| dt and stiffness s_qr = int l_q' l_r' / |x'| dt.
// Exposed for direct verification.
Eigen::MatrixXd edge_mass_matrix(int order, const std::vector<Vec2>& points);
Eigen::MatrixXd edge_stiffness_matrix(int order, const std::vector<Vec2>& points);

// Largest symmetry defect max |m - m^T| over all entries.
double symmetry_defect(const SparseMat& m);

}  // namespace stokes2p
