#pragma once

#include <string>
#include <vector>

#include "msmfe/assembly.hpp"

namespace msmfe {

enum class SolverKind { Auto, Cholesky, Cg };

SolverKind parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);

struct SolverConfig {
  SolverKind kind = SolverKind::Auto;
  /// Relative residual target for CG.
  double tol = 1e-12;
  /// 0 means 10 x number of unknowns.
  int max_iters = 0;
  /// Auto picks sparse Cholesky below this many unknowns and CG otherwise.
  int direct_threshold = 50000;
};

/// Local elimination data of one vertex block.
struct VertexElimination {
  std::vector<int> dofs;          // stress unknowns of the block
  Eigen::LLT<Eigen::MatrixXd> factor;
  std::vector<int> unknowns;      // reduced unknowns coupled to the block
  Eigen::MatrixXd coupling;       // dofs x unknowns, rows of [A_su; A_sg]^T
  Vector load;                    // g restricted to the block
};

/// Cell-centered system left after eliminating stress (and, for MSMFE-1, rotation).
///
/// Unknown ordering is [u; gamma] before rotation elimination and [u] after.
struct ReducedSystem {
  Method method = Method::Msmfe1;
  int num_stress = 0;
  int num_displacement = 0;
  int num_rotation = 0;
  bool rotation_eliminated = false;

  SparseMatrix matrix;
  Vector rhs;
  std::vector<VertexElimination> vertices;

  // Rotation recovery after eliminate_rotation: gamma = D^{-1} (h - C u).
  Vector rotation_diag;          // D = A_sg A_ss^{-1} A_sg^T
  SparseMatrix rotation_coupling;  // C = A_sg A_ss^{-1} A_su^T
  Vector rotation_rhs;           // h = A_sg A_ss^{-1} g

  [[nodiscard]] int size() const { return static_cast<int>(rhs.size()); }
};

struct SolutionFields {
  Method method = Method::Msmfe1;
  Vector stress;        // per stress unknown
  Vector displacement;  // (u_x, u_y) per cell
  Vector rotation;      // per cell (MSMFE-0) or per vertex (MSMFE-1)
};

struct SolveStats {
  SolverKind kind = SolverKind::Cholesky;
  int iterations = 0;
  double relative_residual = 0.0;
  int reduced_size = 0;
};

/// Factors every vertex block and forms
///   [A_su A^{-1} A_su^T   A_su A^{-1} A_sg^T] [u]   [A_su A^{-1} g - f]
///   [A_sg A^{-1} A_su^T   A_sg A^{-1} A_sg^T] [g] = [A_sg A^{-1} g    ]
/// without forming A_ss^{-1}. Throws NotPositiveDefinite on an indefinite block.
ReducedSystem eliminate_stress(const AssembledSystem& system, const DofMap& dofs);

/// MSMFE-1 only: removes the (diagonal) rotation block, leaving the displacement system.
ReducedSystem eliminate_rotation(ReducedSystem reduced);

/// Solves the reduced system and recovers rotation and stress.
SolutionFields solve(const ReducedSystem& reduced, const SolverConfig& config = {}, SolveStats* stats = nullptr);

/// Assemble, reduce (including rotation elimination for MSMFE-1) and solve.
SolutionFields solve_problem(const AssembledSystem& system, const DofMap& dofs, const SolverConfig& config = {},
                             SolveStats* stats = nullptr);

/// Direct solve of the full block system; reference for the reduction. At most
/// `max_unknowns` unknowns.
SolutionFields solve_saddle_oracle(const AssembledSystem& system, int max_unknowns = 20000);

/// Full block system in the sign convention documented on AssembledSystem.
SparseMatrix saddle_matrix(const AssembledSystem& system);

/// Residual norms of the three block rows at a given triple.
struct SaddleResidual {
  double stress = 0.0;
  double displacement = 0.0;
  double rotation = 0.0;
};
SaddleResidual saddle_residual(const AssembledSystem& system, const SolutionFields& fields);

/// True when a sparse Cholesky factorization of the matrix succeeds.
bool cholesky_succeeds(const SparseMatrix& matrix);

}  // namespace msmfe
