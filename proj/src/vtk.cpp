#include "stokes2p/vtk.hpp"

#include <fstream>

#include "stokes2p/mesh_io.hpp"

namespace stokes2p {

void write_vtk(const std::string& path, const CurvedMesh& mesh, const FeSystem& sys,
               const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
  const int k = mesh.order;
  const RefElement& ref = ref_element(k);
  const RefElement& pref = ref_element(sys.pressure_degree());

  // Equispaced reference lattice and its sub-triangulation.
  std::vector<std::pair<double, double>> lattice;
  std::vector<std::array<int, 3>> subtris;
  std::vector<std::vector<int>> grid(k + 1, std::vector<int>(k + 1, -1));
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k - i; ++j) {
      grid[i][j] = static_cast<int>(lattice.size());
      lattice.emplace_back(double(i) / k, double(j) / k);
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k - i; ++j) {
      subtris.push_back({grid[i][j], grid[i + 1][j], grid[i][j + 1]});
      if (i + j < k - 1) subtris.push_back({grid[i + 1][j], grid[i + 1][j + 1], grid[i][j + 1]});
    }

  // Basis values at lattice points.
  const int nl = static_cast<int>(lattice.size());
  Eigen::MatrixXd phi(nl, ref.num_nodes()), pphi(nl, pref.num_nodes());
  Eigen::VectorXd tmp;
  for (int q = 0; q < nl; ++q) {
    ref.eval(lattice[q].first, lattice[q].second, tmp);
    phi.row(q) = tmp.transpose();
    pref.eval(lattice[q].first, lattice[q].second, tmp);
    pphi.row(q) = tmp.transpose();
  }

  const int ne = mesh.num_elements();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open VTK file for writing: " + path);
  f << "# vtk DataFile Version 3.0\n";
  f << "two-phase Stokes snapshot\n";
  f << "ASCII\n";
  f << "DATASET UNSTRUCTURED_GRID\n";
  f << "POINTS " << nl * ne << " double\n";

  std::vector<double> press(nl * ne);
  std::vector<Vec2> vel(nl * ne);
  Eigen::VectorXd ux(ref.num_nodes()), uy(ref.num_nodes()), pl(pref.num_nodes());
  for (int e = 0; e < ne; ++e) {
    const auto& ids = mesh.elements[e].nodes;
    for (int i = 0; i < ref.num_nodes(); ++i) {
      const int gi = sys.velocity_node_index(ids[i]);
      ux[i] = gi < 0 ? 0.0 : u[2 * gi];
      uy[i] = gi < 0 ? 0.0 : u[2 * gi + 1];
    }
    const auto& pdofs = sys.pressure_element_dofs(e);
    for (int i = 0; i < pref.num_nodes(); ++i) pl[i] = p[pdofs[i]];
    for (int q = 0; q < nl; ++q) {
      Vec2 x = Vec2::Zero();
      for (int i = 0; i < ref.num_nodes(); ++i) x += phi(q, i) * mesh.nodes[ids[i]];
      f << format_double(x.x()) << " " << format_double(x.y()) << " 0\n";
      vel[e * nl + q] = Vec2(phi.row(q) * ux, phi.row(q) * uy);
      press[e * nl + q] = pphi.row(q) * pl;
    }
  }

  const int nc = static_cast<int>(subtris.size()) * ne;
  f << "CELLS " << nc << " " << 4 * nc << "\n";
  for (int e = 0; e < ne; ++e)
    for (const auto& t : subtris)
      f << "3 " << e * nl + t[0] << " " << e * nl + t[1] << " " << e * nl + t[2] << "\n";
  f << "CELL_TYPES " << nc << "\n";
  for (int c = 0; c < nc; ++c) f << "5\n";

  f << "POINT_DATA " << nl * ne << "\n";
  f << "VECTORS velocity double\n";
  for (const Vec2& v : vel)
    f << format_double(v.x()) << " " << format_double(v.y()) << " 0\n";
  f << "SCALARS pressure double 1\n";
  f << "LOOKUP_TABLE default\n";
  for (double v : press) f << format_double(v) << "\n";

  f << "CELL_DATA " << nc << "\n";
  f << "SCALARS phase int 1\n";
  f << "LOOKUP_TABLE default\n";
  for (int e = 0; e < ne; ++e)
    for (std::size_t s = 0; s < subtris.size(); ++s)
      f << (mesh.elements[e].phase == Phase::minus ? -1 : 1) << "\n";
}

}  // namespace stokes2p
