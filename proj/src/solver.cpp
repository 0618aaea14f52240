#include "msmfe/solver.hpp"

#include <algorithm>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace msmfe {
namespace {

using Triplet = Eigen::Triplet<double>;

int local_index(std::vector<int>& unknowns, int global) {
  auto it = std::find(unknowns.begin(), unknowns.end(), global);
  if (it != unknowns.end()) return static_cast<int>(it - unknowns.begin());
  unknowns.push_back(global);
  return static_cast<int>(unknowns.size()) - 1;
}

}  // namespace

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "auto") return SolverKind::Auto;
  if (name == "cholesky") return SolverKind::Cholesky;
  if (name == "cg") return SolverKind::Cg;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected auto, cholesky or cg)");
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Cholesky: return "cholesky";
    default: return "cg";
  }
}

ReducedSystem eliminate_stress(const AssembledSystem& system, const DofMap& dofs) {
  ReducedSystem reduced;
  reduced.method = system.method;
  reduced.num_stress = system.num_stress();
  reduced.num_displacement = system.num_displacement();
  reduced.num_rotation = system.num_rotation();
  const int nu = reduced.num_displacement;
  const int n = nu + reduced.num_rotation;

  // Column access to A_su and A_sg (stored column-major: one column per stress unknown).
  const SparseMatrix& a_su = system.a_su;
  const SparseMatrix& a_sg = system.a_sg;

  reduced.rhs = Vector::Zero(n);
  reduced.rhs.head(nu) = -system.rhs_f;
  reduced.vertices.resize(system.stress_blocks.size());

  std::vector<Triplet> triplets;
  triplets.reserve(system.stress_blocks.size() * 100);

  for (std::size_t v = 0; v < system.stress_blocks.size(); ++v) {
    const VertexBlock& block = system.stress_blocks[v];
    VertexElimination& elim = reduced.vertices[v];
    elim.dofs = block.dofs;
    const int m = static_cast<int>(block.dofs.size());
    if (m == 0) continue;
    if (block.dofs != dofs.vertex_block(static_cast<int>(v))) {
      throw std::logic_error("eliminate_stress: stress blocks do not match the DofMap");
    }

    elim.factor.compute(block.matrix);
    if (elim.factor.info() != Eigen::Success) {
      throw NotPositiveDefinite("eliminate_stress: vertex block " + std::to_string(v) +
                                " is not positive definite");
    }

    // Gather the couplings column by column.
    std::vector<std::tuple<int, int, double>> entries;
    for (int a = 0; a < m; ++a) {
      const int dof = block.dofs[a];
      for (SparseMatrix::InnerIterator it(a_su, dof); it; ++it) {
        entries.emplace_back(a, local_index(elim.unknowns, static_cast<int>(it.row())), it.value());
      }
      for (SparseMatrix::InnerIterator it(a_sg, dof); it; ++it) {
        entries.emplace_back(a, local_index(elim.unknowns, nu + static_cast<int>(it.row())), it.value());
      }
    }
    const int q = static_cast<int>(elim.unknowns.size());
    elim.coupling = Eigen::MatrixXd::Zero(m, q);
    for (const auto& [a, col, value] : entries) elim.coupling(a, col) += value;

    elim.load.resize(m);
    for (int a = 0; a < m; ++a) elim.load(a) = system.rhs_g(block.dofs[a]);

    const Eigen::MatrixXd solved = elim.factor.solve(elim.coupling);
    const Eigen::MatrixXd local_schur = elim.coupling.transpose() * solved;
    const Vector local_rhs = solved.transpose() * elim.load;
    for (int i = 0; i < q; ++i) {
      reduced.rhs(elim.unknowns[i]) += local_rhs(i);
      for (int j = 0; j < q; ++j) triplets.emplace_back(elim.unknowns[i], elim.unknowns[j], local_schur(i, j));
    }
  }

  reduced.matrix.resize(n, n);
  reduced.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return reduced;
}

ReducedSystem eliminate_rotation(ReducedSystem reduced) {
  if (reduced.method != Method::Msmfe1) {
    throw std::invalid_argument("eliminate_rotation: only defined for MSMFE-1 (diagonal rotation block)");
  }
  if (reduced.rotation_eliminated) throw std::invalid_argument("eliminate_rotation: already eliminated");
  const int nu = reduced.num_displacement;
  const int nr = reduced.num_rotation;

  const SparseMatrix k_uu = reduced.matrix.topLeftCorner(nu, nu);
  const SparseMatrix k_gu = reduced.matrix.bottomLeftCorner(nr, nu);
  const SparseMatrix k_gg = reduced.matrix.bottomRightCorner(nr, nr);

  Vector diag = Vector::Zero(nr);
  for (int col = 0; col < k_gg.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(k_gg, col); it; ++it) {
      if (it.row() != it.col()) {
        if (it.value() != 0.0) throw SolverError("eliminate_rotation: rotation block is not diagonal");
        continue;
      }
      diag(col) += it.value();
    }
  }
  for (int r = 0; r < nr; ++r) {
    if (!(diag(r) > 0.0)) {
      throw NotPositiveDefinite("eliminate_rotation: nonpositive rotation diagonal at vertex " + std::to_string(r));
    }
  }

  const Vector inv_diag = diag.cwiseInverse();
  const SparseMatrix scaled = inv_diag.asDiagonal() * k_gu;
  SparseMatrix schur = k_uu - SparseMatrix(k_gu.transpose() * scaled);
  schur.prune(0.0);

  const Vector h = reduced.rhs.tail(nr);
  Vector rhs = reduced.rhs.head(nu) - k_gu.transpose() * inv_diag.cwiseProduct(h);

  reduced.rotation_diag = std::move(diag);
  reduced.rotation_coupling = k_gu;
  reduced.rotation_rhs = h;
  reduced.matrix = std::move(schur);
  reduced.rhs = std::move(rhs);
  reduced.rotation_eliminated = true;
  return reduced;
}

SolutionFields solve(const ReducedSystem& reduced, const SolverConfig& config, SolveStats* stats) {
  const int n = reduced.size();
  SolverKind kind = config.kind;
  if (kind == SolverKind::Auto) kind = n < config.direct_threshold ? SolverKind::Cholesky : SolverKind::Cg;

  Vector x;
  SolveStats local_stats;
  local_stats.kind = kind;
  local_stats.reduced_size = n;
  if (kind == SolverKind::Cholesky) {
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(reduced.matrix);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("solve: reduced matrix is not positive definite");
    x = llt.solve(reduced.rhs);
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(config.tol);
    cg.setMaxIterations(config.max_iters > 0 ? config.max_iters : 10 * std::max(n, 1));
    cg.compute(reduced.matrix);
    x = cg.solve(reduced.rhs);
    local_stats.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success) {
      throw SolverError("solve: CG did not converge in " + std::to_string(cg.iterations()) + " iterations");
    }
  }
  const double rhs_norm = reduced.rhs.norm();
  local_stats.relative_residual = rhs_norm > 0.0 ? (reduced.matrix * x - reduced.rhs).norm() / rhs_norm : 0.0;
  if (stats) *stats = local_stats;

  const int nu = reduced.num_displacement;
  SolutionFields fields;
  fields.method = reduced.method;
  fields.displacement = x.head(nu);
  if (reduced.rotation_eliminated) {
    fields.rotation = (reduced.rotation_rhs - reduced.rotation_coupling * fields.displacement)
                          .cwiseQuotient(reduced.rotation_diag);
  } else {
    fields.rotation = x.tail(reduced.num_rotation);
  }

  fields.stress = Vector::Zero(reduced.num_stress);
  for (const VertexElimination& elim : reduced.vertices) {
    if (elim.dofs.empty()) continue;
    Vector local(elim.unknowns.size());
    for (std::size_t i = 0; i < elim.unknowns.size(); ++i) {
      const int g = elim.unknowns[i];
      local(i) = g < nu ? fields.displacement(g) : fields.rotation(g - nu);
    }
    const Vector sigma = elim.factor.solve(elim.load - elim.coupling * local);
    for (std::size_t a = 0; a < elim.dofs.size(); ++a) fields.stress(elim.dofs[a]) = sigma(a);
  }
  return fields;
}

SolutionFields solve_problem(const AssembledSystem& system, const DofMap& dofs, const SolverConfig& config,
                             SolveStats* stats) {
  ReducedSystem reduced = eliminate_stress(system, dofs);
  if (system.method == Method::Msmfe1) reduced = eliminate_rotation(std::move(reduced));
  return solve(reduced, config, stats);
}

SparseMatrix saddle_matrix(const AssembledSystem& system) {
  const int ns = system.num_stress();
  const int nu = system.num_displacement();
  const int n = ns + nu + system.num_rotation();
  std::vector<Triplet> triplets;
  const SparseMatrix a_ss = system.stress_matrix();
  for (int k = 0; k < a_ss.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a_ss, k); it; ++it) triplets.emplace_back(it.row(), it.col(), it.value());
  }
  auto add_coupling = [&](const SparseMatrix& b, int offset) {
    for (int k = 0; k < b.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
        const int row = offset + static_cast<int>(it.row());
        const int col = static_cast<int>(it.col());
        triplets.emplace_back(col, row, it.value());
        triplets.emplace_back(row, col, -it.value());
      }
    }
  };
  add_coupling(system.a_su, ns);
  add_coupling(system.a_sg, ns + nu);
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SolutionFields solve_saddle_oracle(const AssembledSystem& system, int max_unknowns) {
  const int ns = system.num_stress();
  const int nu = system.num_displacement();
  const int nr = system.num_rotation();
  const int n = ns + nu + nr;
  if (n > max_unknowns) {
    throw std::invalid_argument("solve_saddle_oracle: " + std::to_string(n) + " unknowns exceeds the limit of " +
                                std::to_string(max_unknowns));
  }
  SparseMatrix m = saddle_matrix(system);
  m.makeCompressed();
  Vector rhs = Vector::Zero(n);
  rhs.head(ns) = system.rhs_g;
  rhs.segment(ns, nu) = -system.rhs_f;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw SolverError("solve_saddle_oracle: singular saddle-point system");
  const Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolverError("solve_saddle_oracle: solve failed");

  SolutionFields fields;
  fields.method = system.method;
  fields.stress = x.head(ns);
  fields.displacement = x.segment(ns, nu);
  fields.rotation = x.tail(nr);
  return fields;
}

SaddleResidual saddle_residual(const AssembledSystem& system, const SolutionFields& fields) {
  const SparseMatrix a_ss = system.stress_matrix();
  SaddleResidual r;
  r.stress = (a_ss * fields.stress + system.a_su.transpose() * fields.displacement +
              system.a_sg.transpose() * fields.rotation - system.rhs_g)
                 .norm();
  r.displacement = (system.a_su * fields.stress - system.rhs_f).norm();
  r.rotation = (system.a_sg * fields.stress).norm();
  return r;
}

bool cholesky_succeeds(const SparseMatrix& matrix) {
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(matrix);
  return llt.info() == Eigen::Success;
}

}  // namespace msmfe
