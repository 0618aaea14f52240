#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msmfe/types.hpp"

namespace msmfe {

enum class BoundaryKind : std::uint8_t { Interior, Dirichlet, Neumann };

/// Tag for a boundary segment given by its two end vertices (any order).
struct BoundaryTag {
  int v0 = -1;
  int v1 = -1;
  BoundaryKind kind = BoundaryKind::Dirichlet;
};

/// Global edge. Endpoints are stored lower index first; the global unit normal is the
/// unit tangent (v[0] -> v[1]) rotated by -90 degrees.
struct Edge {
  std::array<int, 2> v{};
  BoundaryKind kind = BoundaryKind::Interior;
};

/// Local edge k of a cell joins local vertices k and (k+1)%4. sign[k] is +1 when the
/// outward normal of the cell on that edge coincides with the global edge normal.
struct CellEdges {
  std::array<int, 4> edge{};
  std::array<int, 4> sign{};
};

/// Conforming quadrilateral mesh. Cells list their vertices counterclockwise; the first
/// vertex is the image of the reference corner (0,0).
///
/// Immutable after construction. The constructor derives edges, orientation signs and
/// adjacency and validates every cell (positive Jacobian at the four corners).
class QuadMesh {
 public:
  QuadMesh(std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
           const std::vector<BoundaryTag>& boundary_tags = {});

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_cells() const { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const Point& vertex(int v) const { return vertices_[v]; }
  [[nodiscard]] const std::vector<std::array<int, 4>>& cells() const { return cells_; }
  [[nodiscard]] const std::array<int, 4>& cell(int c) const { return cells_[c]; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(int e) const { return edges_[e]; }
  [[nodiscard]] const CellEdges& cell_edges(int c) const { return cell_edges_[c]; }
  [[nodiscard]] const std::vector<int>& vertex_cells(int v) const { return vertex_cells_[v]; }
  [[nodiscard]] const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
  /// Cells adjacent to edge e; the second entry is -1 on the boundary.
  [[nodiscard]] const std::array<int, 2>& edge_cells(int e) const { return edge_cells_[e]; }

  [[nodiscard]] std::array<Point, 4> cell_coords(int c) const;
  [[nodiscard]] bool is_boundary_edge(int e) const { return edges_[e].kind != BoundaryKind::Interior; }
  /// Unit normal of edge e in its global orientation.
  [[nodiscard]] Vec2 edge_normal(int e) const;
  [[nodiscard]] double edge_length(int e) const;

  /// Max over cells of the largest vertex-pair distance.
  [[nodiscard]] double h() const { return h_; }

  /// Boundary segments with their tags, in edge order (the format written to mesh files).
  [[nodiscard]] std::vector<BoundaryTag> boundary_tags() const;

  /// Copy of the mesh with every boundary edge retagged by `kind_of(midpoint)`.
  template <typename F>
  [[nodiscard]] QuadMesh with_boundary_kinds(F kind_of) const {
    std::vector<BoundaryTag> tags;
    for (const Edge& e : edges_) {
      if (e.kind == BoundaryKind::Interior) continue;
      const Point mid = 0.5 * (vertices_[e.v[0]] + vertices_[e.v[1]]);
      tags.push_back({e.v[0], e.v[1], kind_of(mid)});
    }
    return QuadMesh(vertices_, cells_, tags);
  }

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<Edge> edges_;
  std::vector<CellEdges> cell_edges_;
  std::vector<std::vector<int>> vertex_cells_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::array<int, 2>> edge_cells_;
  double h_ = 0.0;
};

/// n x n uniform mesh of the unit square, all boundary edges Dirichlet.
QuadMesh generate_uniform(int n);

/// Splits every cell into four through edge midpoints and the bilinear image of the
/// reference center. Boundary tags are inherited.
QuadMesh refine_uniform(const QuadMesh& mesh);

/// The n x n uniform mesh with vertices moved by x + 0.1 sin(2 pi x) sin(2 pi y) (1, 1).
QuadMesh generate_smooth(int n);

/// The smooth vertex map used by generate_smooth.
Point smooth_map(const Point& p);

/// Signed area of the vertex polygon of cell c (positive for counterclockwise cells).
double cell_area(const QuadMesh& mesh, int c);

/// ||r1 - r2 + r3 - r4||: zero exactly for parallelograms.
double parallelogram_defect(const std::array<Point, 4>& r);

struct MeshQualityReport {
  double max_parallelogram_defect = 0.0;
  std::vector<int> m1_violations;  // cells with more than one Neumann edge
  double m2_max_ratio = 0.0;       // max ||r_e - r_e~|| / h^2 over qualifying edge pairs
  double h = 0.0;
};

struct QualityOptions {
  /// A cell counts as a non-parallelogram when its defect exceeds this times h.
  double parallelogram_tolerance = 1e-12;
};

MeshQualityReport quality_report(const QuadMesh& mesh, const QualityOptions& options = {});

// Plain-text mesh format:
//   NV NE NB
//   x y            (NV lines)
//   v0 v1 v2 v3    (NE lines, counterclockwise, 0-based)
//   v0 v1 tag      (NB lines, tag D or N)
QuadMesh read_mesh(std::istream& in);
QuadMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const QuadMesh& mesh);

}  // namespace msmfe
