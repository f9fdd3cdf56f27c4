#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bernoulli/errors.hpp"
#include "bernoulli/meshing.hpp"
#include "text_util.hpp"

namespace bernoulli {

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << mesh.nodes.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary_edges.size() << '\n';
  for (const Point2& p : mesh.nodes) {
    os << detail::format_real(p.x) << ' ' << detail::format_real(p.y) << '\n';
  }
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    os << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
  }
}

namespace {

std::istringstream next_record(std::istream& is, const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    const auto t = detail::trim(line);
    if (!t.empty() && t.front() != '#') return std::istringstream(std::string(t));
  }
  throw MeshError(std::string("mesh file truncated while reading ") + what);
}

}  // namespace

Mesh read_mesh(std::istream& is) {
  std::size_t nv = 0, nt = 0, nb = 0;
  if (!(next_record(is, "header") >> nv >> nt >> nb)) throw MeshError("bad mesh header");
  Mesh mesh;
  mesh.nodes.resize(nv);
  for (auto& p : mesh.nodes) {
    if (!(next_record(is, "vertices") >> p.x >> p.y)) throw MeshError("bad vertex line");
  }
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles) {
    if (!(next_record(is, "triangles") >> t[0] >> t[1] >> t[2])) throw MeshError("bad triangle line");
  }
  mesh.boundary_edges.resize(nb);
  for (auto& e : mesh.boundary_edges) {
    std::string tag;
    if (!(next_record(is, "boundary edges") >> e.a >> e.b >> tag)) {
      throw MeshError("bad boundary line");
    }
    e.tag = parse_boundary_tag(tag);
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace bernoulli
