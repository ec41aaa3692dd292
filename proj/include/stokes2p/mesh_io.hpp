#pragma once

#include <string>

#include "stokes2p/curved_mesh.hpp"

namespace stokes2p {

// Full-precision decimal rendering (round-trips doubles exactly).
std::string format_double(double v);

// Text format:
//   MESH2D k=<int>
//   NODES <n>      followed by n lines "x y"
//   ELEMENTS <m>   followed by m lines of node ids and a phase tag -/+
//   INTERFACE_EDGES <e>  followed by e lines of k+1 node ids
//   BOUNDARY <b>   followed by b lines of node ids
std::string export_mesh(const CurvedMesh& mesh);
void export_mesh_file(const CurvedMesh& mesh, const std::string& path);

CurvedMesh import_mesh(const std::string& text);
CurvedMesh import_mesh_file(const std::string& path);

}  // namespace stokes2p
