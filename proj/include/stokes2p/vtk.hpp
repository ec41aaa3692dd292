#pragma once

#include <string>

#include "stokes2p/fe_space.hpp"

namespace stokes2p {

// Legacy ASCII VTK unstructured grid of a solved state. Every curved
// element is rendered as k^2 flat triangles over its equispaced reference
// lattice; velocity and pressure are sampled at the lattice points and the
// phase tag is attached as cell data. No timestamps or other run metadata
// appear in the body, so identical states serialize identically.
void write_vtk(const std::string& path, const CurvedMesh& mesh, const FeSystem& sys,
               const Eigen::VectorXd& u, const Eigen::VectorXd& p);

}  // namespace stokes2p
