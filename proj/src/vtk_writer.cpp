#include "msmfe/vtk_writer.hpp"

#include <fstream>
#include <ostream>

#include "msmfe/analysis.hpp"

namespace msmfe {
namespace {

constexpr int kVtkQuad = 9;

void write_vectors(std::ostream& out, const char* name, const std::vector<Vec2>& values) {
  out << "VECTORS " << name << " double\n";
  for (const Vec2& v : values) out << v.x() << ' ' << v.y() << " 0\n";
}

void write_scalars(std::ostream& out, const char* name, const Vector& values) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) out << values(i) << '\n';
}

}  // namespace

void write_vtk(std::ostream& out, const QuadMesh& mesh, const DofMap& dofs, const SolutionFields& fields,
               const std::string& title) {
  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();
  out.precision(16);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (const auto& c : mesh.cells()) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) out << kVtkQuad << '\n';

  const auto& corners = reference_corners();
  std::vector<Vec2> u(nc), row1_cell(nc), row2_cell(nc);
  std::vector<Vec2> row1_point(nv, Vec2::Zero()), row2_point(nv, Vec2::Zero());
  std::vector<int> count(nv, 0);
  for (int c = 0; c < nc; ++c) {
    u[c] = Vec2(fields.displacement(2 * c), fields.displacement(2 * c + 1));
    const Mat2 center = discrete_stress(mesh, dofs, fields.stress, c, Point(0.5, 0.5));
    row1_cell[c] = center.row(0).transpose();
    row2_cell[c] = center.row(1).transpose();
    for (int i = 0; i < 4; ++i) {
      const int v = mesh.cell(c)[i];
      const Mat2 s = discrete_stress(mesh, dofs, fields.stress, c, corners[i]);
      row1_point[v] += s.row(0).transpose();
      row2_point[v] += s.row(1).transpose();
      ++count[v];
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (count[v] == 0) continue;
    row1_point[v] /= count[v];
    row2_point[v] /= count[v];
  }

  out << "CELL_DATA " << nc << '\n';
  write_vectors(out, "displacement", u);
  write_vectors(out, "stress_row1", row1_cell);
  write_vectors(out, "stress_row2", row2_cell);
  if (fields.method == Method::Msmfe0) write_scalars(out, "rotation", fields.rotation);

  out << "POINT_DATA " << nv << '\n';
  write_vectors(out, "stress_row1", row1_point);
  write_vectors(out, "stress_row2", row2_point);
  if (fields.method == Method::Msmfe1) write_scalars(out, "rotation", fields.rotation);
}

void write_vtk_file(const std::string& path, const QuadMesh& mesh, const DofMap& dofs,
                    const SolutionFields& fields) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_vtk(out, mesh, dofs, fields);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace msmfe
