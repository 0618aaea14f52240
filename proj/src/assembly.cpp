#include "msmfe/assembly.hpp"

#include <cmath>

namespace msmfe {
namespace {

using Triplet = Eigen::Triplet<double>;

TensorOperator checked_compliance(const ComplianceField& compliance, const Point& x) {
  const TensorOperator a = compliance(x);
  if (!a.isApprox(a.transpose(), 1e-12)) {
    throw NotPositiveDefinite("compliance is not symmetric at (" + std::to_string(x.x()) + ", " +
                              std::to_string(x.y()) + ")");
  }
  if (a.llt().info() != Eigen::Success) {
    throw NotPositiveDefinite("compliance is not positive definite at (" + std::to_string(x.x()) + ", " +
                              std::to_string(x.y()) + ")");
  }
  return a;
}

// Integral of the reference normal trace of vector basis b along its own reference edge.
double reference_edge_flux(int b) {
  static const std::array<double, 8> flux = [] {
    std::vector<double> s, w;
    gauss_rule_1d(2, s, w);
    const auto& basis = ReferenceBasis::instance();
    std::array<double, 8> out{};
    for (int vb = 0; vb < 8; ++vb) {
      const int edge = vb / 2;
      const Point& a = reference_corners()[edge];
      const Point& c = reference_corners()[(edge + 1) % 4];
      for (std::size_t q = 0; q < s.size(); ++q) {
        out[vb] += w[q] * basis.vector_value(vb, a + s[q] * (c - a)).dot(reference_normals()[edge]);
      }
    }
    return out;
  }();
  return flux[b];
}

}  // namespace

DofMap::DofMap(const QuadMesh& mesh, Method method)
    : method_(method),
      num_cells_(mesh.num_cells()),
      num_rotation_(method == Method::Msmfe0 ? mesh.num_cells() : mesh.num_vertices()) {
  stress_index_.assign(4 * static_cast<std::size_t>(mesh.num_edges()), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.kind == BoundaryKind::Neumann) continue;
    for (int endpoint = 0; endpoint < 2; ++endpoint) {
      for (int row = 0; row < 2; ++row) {
        stress_index_[4 * e + 2 * endpoint + row] = static_cast<int>(stress_info_.size());
        stress_info_.push_back({e, endpoint, row, edge.v[endpoint]});
      }
    }
  }

  vertex_blocks_.resize(mesh.num_vertices());
  block_slot_.assign(stress_info_.size(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int e : mesh.vertex_edges(v)) {
      const int endpoint = mesh.edge(e).v[0] == v ? 0 : 1;
      for (int row = 0; row < 2; ++row) {
        const int dof = stress_dof(e, endpoint, row);
        if (dof < 0) continue;
        block_slot_[dof] = static_cast<int>(vertex_blocks_[v].size());
        vertex_blocks_[v].push_back(dof);
      }
    }
  }
}

DofMap::LocalStress DofMap::local_stress(const QuadMesh& mesh, int cell) const {
  LocalStress local;
  const auto& cv = mesh.cell(cell);
  const auto& ce = mesh.cell_edges(cell);
  for (int le = 0; le < 4; ++le) {
    const int e = ce.edge[le];
    const bool aligned = mesh.edge(e).v[0] == cv[le];
    for (int j = 0; j < 2; ++j) {
      const int global_endpoint = aligned ? j : 1 - j;
      for (int t = 0; t < 2; ++t) {
        const int k = ReferenceBasis::stress_index(le, j, t);
        local.dof[k] = stress_dof(e, global_endpoint, t);
        local.sign[k] = ce.sign[le];
      }
    }
  }
  return local;
}

DofMap build_dof_map(const QuadMesh& mesh, Method method) { return DofMap(mesh, method); }

SparseMatrix AssembledSystem::stress_matrix() const {
  std::vector<Triplet> triplets;
  for (const VertexBlock& block : stress_blocks) {
    const int m = static_cast<int>(block.dofs.size());
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) triplets.emplace_back(block.dofs[a], block.dofs[b], block.matrix(a, b));
    }
  }
  SparseMatrix s(num_stress(), num_stress());
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

ProblemData problem_data(const ManufacturedCase& mcase) {
  return {mcase.compliance_field(), [&mcase](const Point& x) { return mcase.body_force(x); },
          [&mcase](const Point& x) { return mcase.dirichlet(x); }};
}

Vec2 project_p0_boundary(const std::function<Vec2(const Point&)>& g, const Point& a, const Point& b) {
  static thread_local std::vector<double> s, w;
  if (s.empty()) gauss_rule_1d(3, s, w);
  Vec2 mean = Vec2::Zero();
  for (std::size_t q = 0; q < s.size(); ++q) mean += w[q] * g(a + s[q] * (b - a));
  return mean;
}

// Summation order: cells in increasing index, corners 0..3 within a cell. Each global
// entry receives its contributions in that order, so results are reproducible.
AssemblyOptions AssemblyOptions::table_convention() {
  AssemblyOptions o;
  o.load = LoadRule::Vertex;
  o.boundary = BoundaryRule::EdgeMidpoint;
  return o;
}

AssembledSystem assemble(const QuadMesh& mesh, const DofMap& dofs, const ProblemData& data,
                         const AssemblyOptions& options) {
  const auto& basis = ReferenceBasis::instance();
  const Method method = dofs.method();

  AssembledSystem sys;
  sys.method = method;
  sys.stress_blocks.resize(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& block_dofs = dofs.vertex_block(v);
    sys.stress_blocks[v].vertex = v;
    sys.stress_blocks[v].dofs = block_dofs;
    sys.stress_blocks[v].matrix = Eigen::MatrixXd::Zero(block_dofs.size(), block_dofs.size());
  }
  sys.rhs_g = Vector::Zero(dofs.num_stress());
  sys.rhs_f = Vector::Zero(dofs.num_displacement());

  std::vector<TensorOperator> vertex_compliance(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    vertex_compliance[v] = checked_compliance(data.compliance, mesh.vertex(v));
  }

  std::vector<Triplet> su, sg;
  su.reserve(16 * static_cast<std::size_t>(mesh.num_cells()));
  sg.reserve(16 * static_cast<std::size_t>(mesh.num_cells()));

  const QuadratureRule load_rule =
      options.load == LoadRule::Gauss ? gauss_rule(options.load_gauss_order) : trapezoid_rule();
  const QuadratureRule rotation_rule = gauss_rule(3);
  const Mat2 unit_skew = skew_from_scalar(1.0);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geometry(mesh.cell_coords(c));
    const auto local = dofs.local_stress(mesh, c);
    const auto& cv = mesh.cell(c);

    // Vertex rule for A_ss (and A_sg for MSMFE-1): only the four functions attached to a
    // corner are nonzero there, so each corner feeds one vertex block.
    for (int i = 0; i < 4; ++i) {
      const Point& corner = reference_corners()[i];
      const double j = geometry.det(corner);
      if (!(j > 0.0)) throw DegenerateGeometry("assemble: cell " + std::to_string(c) + " is inverted");
      const auto kdofs = ReferenceBasis::corner_dofs(i);
      std::array<Mat2, 4> values;
      for (int a = 0; a < 4; ++a) values[a] = piola_stress(geometry, basis.stress_value(kdofs[a], corner), corner);

      VertexBlock& block = sys.stress_blocks[cv[i]];
      const TensorOperator& a_op = vertex_compliance[cv[i]];
      for (int a = 0; a < 4; ++a) {
        const int ga = local.dof[kdofs[a]];
        if (ga < 0) continue;
        const Eigen::Vector4d a_tau = a_op * flatten(values[a]);
        for (int b = 0; b < 4; ++b) {
          const int gb = local.dof[kdofs[b]];
          if (gb < 0) continue;
          const double entry = 0.25 * j * a_tau.dot(flatten(values[b]));
          block.matrix(dofs.block_slot(gb), dofs.block_slot(ga)) += local.sign[kdofs[a]] * local.sign[kdofs[b]] * entry;
        }
        if (method == Method::Msmfe1) {
          const double entry = 0.25 * j * contract(values[a], unit_skew);
          sg.emplace_back(DofMap::rotation_dof(cv[i]), ga, local.sign[kdofs[a]] * entry);
        }
      }
    }

    for (int k = 0; k < ReferenceBasis::kStressCount; ++k) {
      const int gk = local.dof[k];
      if (gk < 0) continue;
      const int row = ReferenceBasis::row_of(k);
      su.emplace_back(DofMap::displacement_dof(c, row), gk, local.sign[k] * exact_div_pairing(geometry, k, row));

      if (method == Method::Msmfe0) {
        double integral = 0.0;
        for (std::size_t q = 0; q < rotation_rule.size(); ++q) {
          const Point& p = rotation_rule.points[q];
          integral += rotation_rule.weights[q] * contract(basis.stress_value(k, p) * geometry.jacobian(p).transpose(), unit_skew);
        }
        sg.emplace_back(DofMap::rotation_dof(c), gk, local.sign[k] * integral);
      }
    }

    for (std::size_t q = 0; q < load_rule.size(); ++q) {
      const Point& p = load_rule.points[q];
      const Vec2 f = data.body_force(geometry.map(p));
      const double wj = load_rule.weights[q] * geometry.det(p);
      sys.rhs_f(DofMap::displacement_dof(c, 0)) += wj * f(0);
      sys.rhs_f(DofMap::displacement_dof(c, 1)) += wj * f(1);
    }

    for (int le = 0; le < 4; ++le) {
      if (mesh.edge(mesh.cell_edges(c).edge[le]).kind != BoundaryKind::Dirichlet) continue;
      const Point& a = mesh.vertex(cv[le]);
      const Point& b = mesh.vertex(cv[(le + 1) % 4]);
      const Vec2 g0 = options.boundary == BoundaryRule::EdgeMean ? project_p0_boundary(data.dirichlet, a, b)
                                                                 : data.dirichlet(0.5 * (a + b));
      for (int jend = 0; jend < 2; ++jend) {
        const double flux = reference_edge_flux(2 * le + jend);
        for (int t = 0; t < 2; ++t) {
          const int k = ReferenceBasis::stress_index(le, jend, t);
          if (local.dof[k] >= 0) sys.rhs_g(local.dof[k]) += local.sign[k] * flux * g0(t);
        }
      }
    }
  }

  sys.a_su.resize(dofs.num_displacement(), dofs.num_stress());
  sys.a_su.setFromTriplets(su.begin(), su.end());
  sys.a_sg.resize(dofs.num_rotation(), dofs.num_stress());
  sys.a_sg.setFromTriplets(sg.begin(), sg.end());
  return sys;
}

Eigen::Matrix<double, 16, 16> element_trapezoid_gram(const ElementGeometry& geometry,
                                                     std::span<const TensorOperator, 4> compliance) {
  const auto& basis = ReferenceBasis::instance();
  std::array<std::array<Mat2, 4>, 16> values;
  for (int k = 0; k < 16; ++k) {
    for (int i = 0; i < 4; ++i) {
      const Point& corner = reference_corners()[i];
      values[k][i] = piola_stress(geometry, basis.stress_value(k, corner), corner);
    }
  }
  Eigen::Matrix<double, 16, 16> gram;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      gram(a, b) = trapezoid_stress_stress(geometry, compliance, values[b], values[a]);
    }
  }
  return gram;
}

Eigen::Matrix<double, 16, 16> element_exact_gram(const ElementGeometry& geometry, const ComplianceField& compliance,
                                                 int gauss_order) {
  const auto& basis = ReferenceBasis::instance();
  const QuadratureRule rule = gauss_rule(gauss_order);
  Eigen::Matrix<double, 16, 16> gram = Eigen::Matrix<double, 16, 16>::Zero();
  Eigen::Matrix<double, 4, 16> values;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& p = rule.points[q];
    const double wj = rule.weights[q] * geometry.det(p);
    for (int k = 0; k < 16; ++k) values.col(k) = flatten(piola_stress(geometry, basis.stress_value(k, p), p));
    const TensorOperator a = compliance(geometry.map(p));
    gram += wj * values.transpose() * a * values;
  }
  return gram;
}

SparseMatrix assemble_stress_matrix_exact(const QuadMesh& mesh, const DofMap& dofs,
                                          const ComplianceField& compliance, int gauss_order) {
  std::vector<Triplet> triplets;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geometry(mesh.cell_coords(c));
    const auto local = dofs.local_stress(mesh, c);
    const auto gram = element_exact_gram(geometry, compliance, gauss_order);
    for (int a = 0; a < 16; ++a) {
      if (local.dof[a] < 0) continue;
      for (int b = 0; b < 16; ++b) {
        if (local.dof[b] < 0) continue;
        triplets.emplace_back(local.dof[a], local.dof[b], local.sign[a] * local.sign[b] * gram(a, b));
      }
    }
  }
  SparseMatrix s(dofs.num_stress(), dofs.num_stress());
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

}  // namespace msmfe
