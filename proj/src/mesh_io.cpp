#include "stokes2p/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "stokes2p/errors.hpp"

namespace stokes2p {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string export_mesh(const CurvedMesh& mesh) {
  std::string out;
  out.reserve(64 * mesh.nodes.size());
  out += "MESH2D k=" + std::to_string(mesh.order) + "\n";
  out += "NODES " + std::to_string(mesh.nodes.size()) + "\n";
  for (const Vec2& p : mesh.nodes)
    out += format_double(p.x()) + " " + format_double(p.y()) + "\n";
  out += "ELEMENTS " + std::to_string(mesh.elements.size()) + "\n";
  for (const auto& e : mesh.elements) {
    for (int id : e.nodes) out += std::to_string(id) + " ";
    out += e.phase == Phase::minus ? "-" : "+";
    out += "\n";
  }
  out += "INTERFACE_EDGES " + std::to_string(mesh.interface_edges.size()) + "\n";
  for (const auto& ids : mesh.interface_edges) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(ids[i]);
    }
    out += "\n";
  }
  out += "BOUNDARY " + std::to_string(mesh.boundary_nodes.size()) + "\n";
  for (int id : mesh.boundary_nodes) out += std::to_string(id) + "\n";
  return out;
}

void export_mesh_file(const CurvedMesh& mesh, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open mesh file for writing: " + path);
  f << export_mesh(mesh);
}

namespace {

std::string next_line(std::istringstream& in, int& lineno) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("mesh file truncated at line " + std::to_string(lineno));
  ++lineno;
  return line;
}

}  // namespace

CurvedMesh import_mesh(const std::string& text) {
  std::istringstream in(text);
  int lineno = 0;
  CurvedMesh mesh;

  std::string line = next_line(in, lineno);
  if (line.rfind("MESH2D k=", 0) != 0)
    throw ParseError("line 1: expected header 'MESH2D k=<int>'");
  mesh.order = std::stoi(line.substr(9));
  if (mesh.order < 1) throw ParseError("line 1: invalid mesh order");

  std::size_t n_nodes = 0, n_elems = 0, n_edges = 0, n_bnd = 0;
  {
    std::istringstream ls(next_line(in, lineno));
    std::string tag;
    if (!(ls >> tag >> n_nodes) || tag != "NODES")
      throw ParseError("line " + std::to_string(lineno) + ": expected 'NODES <n>'");
  }
  mesh.nodes.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    std::istringstream ls(next_line(in, lineno));
    if (!(ls >> mesh.nodes[i].x() >> mesh.nodes[i].y()))
      throw ParseError("line " + std::to_string(lineno) + ": expected 'x y'");
  }
  {
    std::istringstream ls(next_line(in, lineno));
    std::string tag;
    if (!(ls >> tag >> n_elems) || tag != "ELEMENTS")
      throw ParseError("line " + std::to_string(lineno) + ": expected 'ELEMENTS <m>'");
  }
  const int nk = (mesh.order + 1) * (mesh.order + 2) / 2;
  mesh.elements.resize(n_elems);
  for (std::size_t i = 0; i < n_elems; ++i) {
    std::istringstream ls(next_line(in, lineno));
    auto& elem = mesh.elements[i];
    elem.nodes.resize(nk);
    for (int j = 0; j < nk; ++j) {
      if (!(ls >> elem.nodes[j]) || elem.nodes[j] < 0 ||
          elem.nodes[j] >= static_cast<int>(n_nodes))
        throw ParseError("line " + std::to_string(lineno) + ": bad element node id");
    }
    std::string tag;
    if (!(ls >> tag) || (tag != "-" && tag != "+"))
      throw ParseError("line " + std::to_string(lineno) + ": expected phase tag - or +");
    elem.phase = tag == "-" ? Phase::minus : Phase::plus;
  }
  {
    std::istringstream ls(next_line(in, lineno));
    std::string tag;
    if (!(ls >> tag >> n_edges) || tag != "INTERFACE_EDGES")
      throw ParseError("line " + std::to_string(lineno) + ": expected 'INTERFACE_EDGES <e>'");
  }
  mesh.interface_edges.resize(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    std::istringstream ls(next_line(in, lineno));
    auto& ids = mesh.interface_edges[i];
    ids.resize(mesh.order + 1);
    for (int j = 0; j <= mesh.order; ++j)
      if (!(ls >> ids[j]) || ids[j] < 0 || ids[j] >= static_cast<int>(n_nodes))
        throw ParseError("line " + std::to_string(lineno) + ": bad interface node id");
  }
  {
    std::istringstream ls(next_line(in, lineno));
    std::string tag;
    if (!(ls >> tag >> n_bnd) || tag != "BOUNDARY")
      throw ParseError("line " + std::to_string(lineno) + ": expected 'BOUNDARY <b>'");
  }
  for (std::size_t i = 0; i < n_bnd; ++i) {
    std::istringstream ls(next_line(in, lineno));
    int id;
    if (!(ls >> id) || id < 0 || id >= static_cast<int>(n_nodes))
      throw ParseError("line " + std::to_string(lineno) + ": bad boundary node id");
    mesh.boundary_nodes.insert(id);
  }

  // Recover interface adjacency and validate the fitted-mesh contract:
  // each interface edge separates a minus and a plus element, and no
  // element carries more than one interface edge.
  std::map<std::pair<int, int>, std::vector<int>> corner_edge_elems;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& nodes = mesh.elements[e].nodes;
    for (int s = 0; s < 3; ++s) {
      const int a = nodes[s], b = nodes[(s + 1) % 3];
      corner_edge_elems[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(e));
    }
  }
  std::map<int, int> interface_edges_per_elem;
  std::set<std::pair<int, int>> interface_keys;
  for (const auto& ids : mesh.interface_edges) {
    const int a = ids.front(), b = ids.back();
    interface_keys.insert({std::min(a, b), std::max(a, b)});
    const auto it = corner_edge_elems.find({std::min(a, b), std::max(a, b)});
    if (it == corner_edge_elems.end() || it->second.size() != 2)
      throw ParseError("interface edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") is not shared by exactly two elements");
    int minus = -1, plus = -1;
    for (int e : it->second) {
      (mesh.elements[e].phase == Phase::minus ? minus : plus) = e;
      if (++interface_edges_per_elem[e] > 1)
        throw ParseError("element " + std::to_string(e) + " carries more than one interface edge");
    }
    if (minus < 0 || plus < 0)
      throw ParseError("interface edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") does not separate the phases");
    mesh.interface_elems.emplace_back(minus, plus);
  }
  // Phases may change only across interface edges.
  for (const auto& [key, elems] : corner_edge_elems) {
    if (elems.size() != 2 || interface_keys.count(key)) continue;
    if (mesh.elements[elems[0]].phase != mesh.elements[elems[1]].phase)
      throw ParseError("phase changes across non-interface edge (" +
                       std::to_string(key.first) + "," + std::to_string(key.second) + ")");
  }

  // Domain box from the node hull (the outer ring lies exactly on it).
  if (!mesh.nodes.empty()) {
    mesh.domain = {mesh.nodes[0].x(), mesh.nodes[0].x(), mesh.nodes[0].y(), mesh.nodes[0].y()};
    for (const Vec2& p : mesh.nodes) {
      mesh.domain.xmin = std::min(mesh.domain.xmin, p.x());
      mesh.domain.xmax = std::max(mesh.domain.xmax, p.x());
      mesh.domain.ymin = std::min(mesh.domain.ymin, p.y());
      mesh.domain.ymax = std::max(mesh.domain.ymax, p.y());
    }
  }
  return mesh;
}

CurvedMesh import_mesh_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open mesh file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return import_mesh(ss.str());
}

}  // namespace stokes2p
