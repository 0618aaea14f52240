#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "msmfe/manufactured.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/reference.hpp"

namespace msmfe {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Global numbering of stress, displacement and rotation unknowns.
///
/// Stress unknowns are the normal components (times edge length) at the two endpoints
/// of every edge, per tensor row, measured against the global edge normal. Unknowns on
/// Neumann edges are constrained to zero and left out of the numbering.
class DofMap {
 public:
  DofMap(const QuadMesh& mesh, Method method);

  struct StressDof {
    int edge;
    int endpoint;  // 0 or 1, index into Edge::v
    int row;
    int vertex;
  };

  /// Global stress index and orientation sign of the 16 local basis functions of a cell;
  /// dof is -1 for constrained functions.
  struct LocalStress {
    std::array<int, 16> dof{};
    std::array<double, 16> sign{};
  };

  [[nodiscard]] Method method() const { return method_; }
  [[nodiscard]] int num_stress() const { return static_cast<int>(stress_info_.size()); }
  [[nodiscard]] int num_displacement() const { return 2 * num_cells_; }
  [[nodiscard]] int num_rotation() const { return num_rotation_; }
  [[nodiscard]] int num_total() const { return num_stress() + num_displacement() + num_rotation(); }

  /// -1 when the unknown sits on a Neumann edge.
  [[nodiscard]] int stress_dof(int edge, int endpoint, int row) const { return stress_index_[4 * edge + 2 * endpoint + row]; }
  [[nodiscard]] const StressDof& stress_info(int dof) const { return stress_info_[dof]; }
  [[nodiscard]] static int displacement_dof(int cell, int component) { return 2 * cell + component; }
  /// Rotation unknown: indexed by cell for MSMFE-0 and by vertex for MSMFE-1.
  [[nodiscard]] static int rotation_dof(int entity) { return entity; }

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertex_blocks_.size()); }
  /// Stress unknowns supported at vertex v (incident edges x 2 rows), in a fixed order.
  [[nodiscard]] const std::vector<int>& vertex_block(int v) const { return vertex_blocks_[v]; }
  /// Position of a stress unknown inside its vertex block.
  [[nodiscard]] int block_slot(int dof) const { return block_slot_[dof]; }

  [[nodiscard]] LocalStress local_stress(const QuadMesh& mesh, int cell) const;

 private:
  Method method_;
  int num_cells_ = 0;
  int num_rotation_ = 0;
  std::vector<int> stress_index_;
  std::vector<StressDof> stress_info_;
  std::vector<std::vector<int>> vertex_blocks_;
  std::vector<int> block_slot_;
};

DofMap build_dof_map(const QuadMesh& mesh, Method method);

/// One diagonal block of A_ss, coupling the stress unknowns of a single vertex.
struct VertexBlock {
  int vertex = -1;
  std::vector<int> dofs;
  Eigen::MatrixXd matrix;
};

/// Blocks of the saddle-point system
///   [ A_ss  A_su^T  A_sg^T ] [sigma]   [ g ]
///   [-A_su    0       0    ] [  u  ] = [-f ]
///   [-A_sg    0       0    ] [gamma]   [ 0 ]
struct AssembledSystem {
  Method method = Method::Msmfe1;
  std::vector<VertexBlock> stress_blocks;  // A_ss, one block per vertex
  SparseMatrix a_su;                       // displacement rows x stress columns
  SparseMatrix a_sg;                       // rotation rows x stress columns
  Vector rhs_g;
  Vector rhs_f;

  [[nodiscard]] int num_stress() const { return static_cast<int>(rhs_g.size()); }
  [[nodiscard]] int num_displacement() const { return static_cast<int>(rhs_f.size()); }
  [[nodiscard]] int num_rotation() const { return static_cast<int>(a_sg.rows()); }
  /// A_ss as a sparse matrix.
  [[nodiscard]] SparseMatrix stress_matrix() const;
};

/// Coefficients and data of the boundary value problem.
struct ProblemData {
  ComplianceField compliance;
  std::function<Vec2(const Point&)> body_force;
  std::function<Vec2(const Point&)> dirichlet;
};

ProblemData problem_data(const ManufacturedCase& mcase);

enum class LoadRule {
  Gauss,   // tensor Gauss rule of load_gauss_order points per direction
  Vertex,  // trapezoid rule at the cell corners
};

enum class BoundaryRule {
  EdgeMean,      // P0 g as the edge average (3-point Gauss)
  EdgeMidpoint,  // P0 g approximated by g at the edge midpoint
};

struct AssemblyOptions {
  LoadRule load = LoadRule::Gauss;
  int load_gauss_order = 4;
  BoundaryRule boundary = BoundaryRule::EdgeMean;

  /// Vertex-rule load and midpoint boundary data, as used for the published tables.
  static AssemblyOptions table_convention();
};

AssembledSystem assemble(const QuadMesh& mesh, const DofMap& dofs, const ProblemData& data,
                         const AssemblyOptions& options = {});

/// Edge average of g over the segment [a, b] (L2 projection onto constants), 3-point Gauss.
Vec2 project_p0_boundary(const std::function<Vec2(const Point&)>& g, const Point& a, const Point& b);

/// 16x16 element matrix of (A tau_j, tau_i)_{Q,E} over the local stress basis, built from
/// trapezoid_stress_stress with the compliance sampled at the element vertices.
Eigen::Matrix<double, 16, 16> element_trapezoid_gram(const ElementGeometry& geometry,
                                                     std::span<const TensorOperator, 4> compliance);

/// 16x16 element matrix of the exact (A tau_j, tau_i)_E, computed with Gauss of the given order.
Eigen::Matrix<double, 16, 16> element_exact_gram(const ElementGeometry& geometry, const ComplianceField& compliance,
                                                 int gauss_order);

/// Global stress matrix with exact (Gauss) integration instead of the vertex rule.
SparseMatrix assemble_stress_matrix_exact(const QuadMesh& mesh, const DofMap& dofs,
                                          const ComplianceField& compliance, int gauss_order);

}  // namespace msmfe
