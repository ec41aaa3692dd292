#include "stokes2p/fe_space.hpp"

#include <fstream>
#include <map>

#include "stokes2p/mesh_io.hpp"

namespace stokes2p {

namespace {

// Side key for pressure dofs: 0 away from the interface, else the phase.
enum : int { kNeutral = 0, kMinus = 1, kPlus = 2 };

int side_of(Phase phase) { return phase == Phase::minus ? kMinus : kPlus; }

}  // namespace

FeSystem::FeSystem(const CurvedMesh& mesh, bool constrain_boundary)
    : order_(mesh.order), boundary_constrained_(constrain_boundary) {
  // Velocity numbering.
  u_node_index_.assign(mesh.num_nodes(), -1);
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    if (constrain_boundary && mesh.boundary_nodes.count(node)) continue;
    u_node_index_[node] = n_u_nodes_++;
  }

  // Interface cycle in edge order; each edge contributes its first k nodes.
  node_to_interface_.assign(mesh.num_nodes(), -1);
  for (const auto& ids : mesh.interface_edges) {
    for (int q = 0; q < order_; ++q) {
      if (node_to_interface_[ids[q]] >= 0) continue;
      node_to_interface_[ids[q]] = static_cast<int>(interface_cycle_.size());
      interface_cycle_.push_back(ids[q]);
    }
  }

  // Pressure: degree k-1 nodes keyed by mesh entity, duplicated on the
  // interface. Entities that lie on the interface are exactly the corner
  // vertices and edge nodes of interface edges.
  const int kp = pressure_degree();
  const RefElement& pref = ref_element(kp);

  std::set<std::pair<int, int>> interface_corner_edges;
  std::set<int> interface_vertices;
  for (const auto& ids : mesh.interface_edges) {
    const int a = ids.front(), b = ids.back();
    interface_corner_edges.insert({std::min(a, b), std::max(a, b)});
    interface_vertices.insert(a);
    interface_vertices.insert(b);
  }

  std::map<std::pair<int, int>, int> vertex_dof;              // (vertex, side)
  std::map<std::tuple<int, int, int, int>, int> edge_dof;     // (va, vb, q, side)
  p_elem_dofs_.resize(mesh.num_elements());
  auto claim = [&](int& slot, Phase phase) {
    if (slot < 0) {
      slot = n_p_++;
      p_dof_phase_.push_back(phase);
    }
    return slot;
  };

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& elem = mesh.elements[e];
    auto& dofs = p_elem_dofs_[e];
    dofs.assign(pref.num_nodes(), -1);
    for (int i = 0; i < pref.num_nodes(); ++i) {
      const RefNode& node = pref.nodes()[i];
      if (node.entity == 0) {
        const int v = elem.nodes[node.sub];
        const int side = interface_vertices.count(v) ? side_of(elem.phase) : kNeutral;
        auto [it, inserted] = vertex_dof.try_emplace({v, side}, -1);
        dofs[i] = claim(it->second, elem.phase);
      } else if (node.entity == 1) {
        const int va = elem.nodes[node.sub];
        const int vb = elem.nodes[(node.sub + 1) % 3];
        const int lo = std::min(va, vb), hi = std::max(va, vb);
        // Store edge dofs in lo->hi order; flip the on-edge position when
        // the element traverses the edge the other way (Gauss-Lobatto
        // points are symmetric, so positions agree).
        const int q = va < vb ? node.order_on_edge : kp - node.order_on_edge;
        const int side =
            interface_corner_edges.count({lo, hi}) ? side_of(elem.phase) : kNeutral;
        auto [it, inserted] = edge_dof.try_emplace({lo, hi, q, side}, -1);
        dofs[i] = claim(it->second, elem.phase);
      } else {
        int fresh = -1;
        dofs[i] = claim(fresh, elem.phase);
      }
    }
  }
}

std::vector<Vec2> FeSystem::pressure_dof_positions(const CurvedMesh& mesh) const {
  const RefElement& pref = ref_element(pressure_degree());
  std::vector<Vec2> pos(n_p_, Vec2::Zero());
  std::vector<bool> seen(n_p_, false);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int i = 0; i < pref.num_nodes(); ++i) {
      const int dof = p_elem_dofs_[e][i];
      if (seen[dof]) continue;
      seen[dof] = true;
      pos[dof] = evaluate_map(mesh, e, pref.nodes()[i].xi, pref.nodes()[i].eta).x;
    }
  }
  return pos;
}

Eigen::VectorXd FeSystem::interface_positions(const CurvedMesh& mesh) const {
  Eigen::VectorXd x(num_interface_dofs());
  for (std::size_t i = 0; i < interface_cycle_.size(); ++i) {
    x[2 * i] = mesh.nodes[interface_cycle_[i]].x();
    x[2 * i + 1] = mesh.nodes[interface_cycle_[i]].y();
  }
  return x;
}

Eigen::VectorXd interpolate_scalar(const CurvedMesh& mesh,
                                   const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd v(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) v[i] = f(mesh.nodes[i]);
  return v;
}

Eigen::VectorXd interpolate_velocity(const CurvedMesh& mesh, const FeSystem& sys,
                                     const std::function<Vec2(const Vec2&)>& f) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(sys.num_velocity_dofs());
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    const int idx = sys.velocity_node_index(node);
    if (idx < 0) continue;
    const Vec2 val = f(mesh.nodes[node]);
    v[2 * idx] = val.x();
    v[2 * idx + 1] = val.y();
  }
  return v;
}

Eigen::VectorXd interpolate_pressure(const CurvedMesh& mesh, const FeSystem& sys,
                                     const std::function<double(const Vec2&, Phase)>& f) {
  const std::vector<Vec2> pos = sys.pressure_dof_positions(mesh);
  Eigen::VectorXd v(sys.num_pressure_dofs());
  for (int dof = 0; dof < sys.num_pressure_dofs(); ++dof)
    v[dof] = f(pos[dof], sys.pressure_dof_phase(dof));
  return v;
}

Eigen::VectorXd interpolate_interface(const CurvedMesh& mesh, const FeSystem& sys,
                                      const std::function<Vec2(const Vec2&)>& f) {
  const auto& cycle = sys.interface_cycle();
  Eigen::VectorXd v(sys.num_interface_dofs());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vec2 val = f(mesh.nodes[cycle[i]]);
    v[2 * i] = val.x();
    v[2 * i + 1] = val.y();
  }
  return v;
}

void write_matrix_market(const SparseMat& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open matrix file for writing: " + path);
  f << "%%MatrixMarket matrix coordinate real general\n";
  f << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it)
      f << it.row() + 1 << " " << it.col() + 1 << " " << format_double(it.value()) << "\n";
}

}  // namespace stokes2p
