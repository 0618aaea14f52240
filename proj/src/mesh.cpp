#include "msmfe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace msmfe {
namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

QuadMesh::QuadMesh(std::vector<Point> vertices, std::vector<std::array<int, 4>> cells,
                   const std::vector<BoundaryTag>& boundary_tags)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  if (cells_.empty()) throw std::invalid_argument("QuadMesh: no cells");

  cell_edges_.resize(cells_.size());
  vertex_cells_.resize(nv);
  vertex_edges_.resize(nv);

  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(cells_.size() * 2 + nv);

  for (int c = 0; c < num_cells(); ++c) {
    const auto& cv = cells_[c];
    for (int k = 0; k < 4; ++k) {
      if (cv[k] < 0 || cv[k] >= nv) throw std::invalid_argument("QuadMesh: vertex index out of range");
    }
    for (int k = 0; k < 4; ++k) {
      const Point& r = vertices_[cv[k]];
      const Point& next = vertices_[cv[(k + 1) % 4]];
      const Point& prev = vertices_[cv[(k + 3) % 4]];
      if (cross(next - r, prev - r) <= 0.0) {
        throw DegenerateGeometry("QuadMesh: cell " + std::to_string(c) +
                                 " has nonpositive Jacobian at local vertex " + std::to_string(k));
      }
    }
    for (int k = 0; k < 4; ++k) vertex_cells_[cv[k]].push_back(c);

    for (int k = 0; k < 4; ++k) {
      const int a = cv[k];
      const int b = cv[(k + 1) % 4];
      if (a == b) throw DegenerateGeometry("QuadMesh: repeated vertex in cell " + std::to_string(c));
      auto [it, inserted] = edge_index.try_emplace(edge_key(a, b), num_edges());
      const int e = it->second;
      if (inserted) {
        edges_.push_back(Edge{{std::min(a, b), std::max(a, b)}, BoundaryKind::Interior});
        edge_cells_.push_back({c, -1});
        vertex_edges_[a].push_back(e);
        vertex_edges_[b].push_back(e);
      } else {
        if (edge_cells_[e][1] != -1) {
          throw std::invalid_argument("QuadMesh: edge shared by more than two cells");
        }
        edge_cells_[e][1] = c;
      }
      cell_edges_[c].edge[k] = e;
      cell_edges_[c].sign[k] = a < b ? 1 : -1;
    }
  }

  for (int e = 0; e < num_edges(); ++e) {
    const auto [c0, c1] = edge_cells_[e];
    if (c1 < 0) {
      edges_[e].kind = BoundaryKind::Dirichlet;
      continue;
    }
    auto sign_in = [&](int c) {
      for (int k = 0; k < 4; ++k) {
        if (cell_edges_[c].edge[k] == e) return cell_edges_[c].sign[k];
      }
      return 0;
    };
    if (sign_in(c0) * sign_in(c1) != -1) {
      throw std::invalid_argument("QuadMesh: inconsistent orientation across edge " + std::to_string(e));
    }
  }

  for (const BoundaryTag& tag : boundary_tags) {
    auto it = edge_index.find(edge_key(tag.v0, tag.v1));
    if (it == edge_index.end() || edges_[it->second].kind == BoundaryKind::Interior) {
      throw std::invalid_argument("QuadMesh: boundary tag (" + std::to_string(tag.v0) + ", " +
                                  std::to_string(tag.v1) + ") is not a boundary edge");
    }
    if (tag.kind == BoundaryKind::Interior) {
      throw std::invalid_argument("QuadMesh: boundary tag must be Dirichlet or Neumann");
    }
    edges_[it->second].kind = tag.kind;
  }

  for (int c = 0; c < num_cells(); ++c) {
    const auto r = cell_coords(c);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) h_ = std::max(h_, (r[i] - r[j]).norm());
    }
  }
}

std::array<Point, 4> QuadMesh::cell_coords(int c) const {
  const auto& cv = cells_[c];
  return {vertices_[cv[0]], vertices_[cv[1]], vertices_[cv[2]], vertices_[cv[3]]};
}

Vec2 QuadMesh::edge_normal(int e) const {
  const Vec2 t = (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).normalized();
  return {t.y(), -t.x()};
}

double QuadMesh::edge_length(int e) const {
  return (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).norm();
}

std::vector<BoundaryTag> QuadMesh::boundary_tags() const {
  std::vector<BoundaryTag> tags;
  for (const Edge& e : edges_) {
    if (e.kind != BoundaryKind::Interior) tags.push_back({e.v[0], e.v[1], e.kind});
  }
  return tags;
}

QuadMesh generate_uniform(int n) {
  if (n < 1) throw std::invalid_argument("generate_uniform: n must be >= 1");
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  std::vector<std::array<int, 4>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return QuadMesh(std::move(vertices), std::move(cells));
}

QuadMesh refine_uniform(const QuadMesh& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  vertices.reserve(mesh.num_vertices() + mesh.num_edges() + mesh.num_cells());

  std::vector<int> midpoint(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    midpoint[e] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(edge.v[0]) + mesh.vertex(edge.v[1])));
  }

  std::vector<std::array<int, 4>> cells;
  cells.reserve(4 * static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cell(c);
    const auto& ce = mesh.cell_edges(c);
    const int center = static_cast<int>(vertices.size());
    const auto r = mesh.cell_coords(c);
    vertices.push_back(0.25 * (r[0] + r[1] + r[2] + r[3]));
    const int m01 = midpoint[ce.edge[0]];
    const int m12 = midpoint[ce.edge[1]];
    const int m23 = midpoint[ce.edge[2]];
    const int m30 = midpoint[ce.edge[3]];
    cells.push_back({v[0], m01, center, m30});
    cells.push_back({m01, v[1], m12, center});
    cells.push_back({center, m12, v[2], m23});
    cells.push_back({m30, center, m23, v[3]});
  }

  std::vector<BoundaryTag> tags;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.kind == BoundaryKind::Interior) continue;
    tags.push_back({edge.v[0], midpoint[e], edge.kind});
    tags.push_back({midpoint[e], edge.v[1], edge.kind});
  }
  return QuadMesh(std::move(vertices), std::move(cells), tags);
}

Point smooth_map(const Point& p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double s = 0.1 * std::sin(two_pi * p.x()) * std::sin(two_pi * p.y());
  return {p.x() + s, p.y() + s};
}

QuadMesh generate_smooth(int n) {
  const QuadMesh base = generate_uniform(n);
  std::vector<Point> vertices = base.vertices();
  for (Point& p : vertices) p = smooth_map(p);
  return QuadMesh(std::move(vertices), base.cells(), base.boundary_tags());
}

double cell_area(const QuadMesh& mesh, int c) {
  const auto r = mesh.cell_coords(c);
  return 0.5 * cross(r[2] - r[0], r[3] - r[1]);
}

double parallelogram_defect(const std::array<Point, 4>& r) { return (r[0] - r[1] + r[2] - r[3]).norm(); }

MeshQualityReport quality_report(const QuadMesh& mesh, const QualityOptions& options) {
  MeshQualityReport report;
  report.h = mesh.h();
  const double h2 = mesh.h() * mesh.h();

  std::vector<bool> non_parallelogram(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double defect = parallelogram_defect(mesh.cell_coords(c));
    report.max_parallelogram_defect = std::max(report.max_parallelogram_defect, defect);
    non_parallelogram[c] = defect > options.parallelogram_tolerance * mesh.h();

    int neumann = 0;
    for (int e : mesh.cell_edges(c).edge) neumann += mesh.edge(e).kind == BoundaryKind::Neumann;
    if (neumann > 1) report.m1_violations.push_back(c);
  }

  // Edge neighbors E, E~ sharing edge (a, b): at each shared vertex compare the edge of E
  // leaving the shared edge with the edge of E~ entering it, both oriented the same way.
  auto other_edge_at = [&](int c, int shared, int vertex) {
    for (int e : mesh.cell_edges(c).edge) {
      const Edge& edge = mesh.edge(e);
      if (e != shared && (edge.v[0] == vertex || edge.v[1] == vertex)) {
        return edge.v[0] == vertex ? edge.v[1] : edge.v[0];
      }
    }
    return -1;
  };
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto [c0, c1] = mesh.edge_cells(e);
    if (c1 < 0 || !(non_parallelogram[c0] || non_parallelogram[c1])) continue;
    for (int vertex : mesh.edge(e).v) {
      const int p = other_edge_at(c0, e, vertex);
      const int q = other_edge_at(c1, e, vertex);
      const Vec2 r_e = mesh.vertex(p) - mesh.vertex(vertex);
      const Vec2 r_other = mesh.vertex(vertex) - mesh.vertex(q);
      report.m2_max_ratio = std::max(report.m2_max_ratio, (r_e - r_other).norm() / h2);
    }
  }
  return report;
}

std::string_view to_string(Method method) { return method == Method::Msmfe0 ? "msmfe0" : "msmfe1"; }

Method parse_method(std::string_view name) {
  if (name == "msmfe0" || name == "MSMFE-0" || name == "0") return Method::Msmfe0;
  if (name == "msmfe1" || name == "MSMFE-1" || name == "1") return Method::Msmfe1;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected msmfe0 or msmfe1)");
}

}  // namespace msmfe
