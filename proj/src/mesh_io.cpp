#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "msmfe/mesh.hpp"

namespace msmfe {

QuadMesh read_mesh(std::istream& in) {
  long nv = 0, ne = 0, nb = 0;
  if (!(in >> nv >> ne >> nb) || nv < 3 || ne < 1 || nb < 0) {
    throw std::invalid_argument("read_mesh: bad header, expected 'NV NE NB'");
  }
  std::vector<Point> vertices(nv);
  for (auto& p : vertices) {
    if (!(in >> p.x() >> p.y())) throw std::invalid_argument("read_mesh: truncated vertex section");
  }
  std::vector<std::array<int, 4>> cells(ne);
  for (auto& c : cells) {
    if (!(in >> c[0] >> c[1] >> c[2] >> c[3])) throw std::invalid_argument("read_mesh: truncated cell section");
  }
  std::vector<BoundaryTag> tags(nb);
  for (auto& t : tags) {
    std::string kind;
    if (!(in >> t.v0 >> t.v1 >> kind)) throw std::invalid_argument("read_mesh: truncated boundary section");
    if (kind == "D") {
      t.kind = BoundaryKind::Dirichlet;
    } else if (kind == "N") {
      t.kind = BoundaryKind::Neumann;
    } else {
      throw std::invalid_argument("read_mesh: boundary tag must be D or N, got '" + kind + "'");
    }
  }
  return QuadMesh(std::move(vertices), std::move(cells), tags);
}

QuadMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_mesh_file: cannot open '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const QuadMesh& mesh) {
  const auto tags = mesh.boundary_tags();
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << tags.size() << '\n';
  out << std::setprecision(17);
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  for (const auto& t : tags) {
    out << t.v0 << ' ' << t.v1 << ' ' << (t.kind == BoundaryKind::Neumann ? 'N' : 'D') << '\n';
  }
}

}  // namespace msmfe
