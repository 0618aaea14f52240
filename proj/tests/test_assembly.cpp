#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace msmfe {
namespace {

ProblemData constant_data(const Vec2& f, const Vec2& g) {
  const TensorOperator a = IsotropicCompliance(123.0, 79.3).matrix();
  return ProblemData{[a](const Point&) { return a; }, [f](const Point&) { return f; },
                     [g](const Point&) { return g; }};
}

QuadMesh single_cell() {
  return QuadMesh({Point(0, 0), Point(1, 0), Point(1.2, 0.9), Point(-0.1, 1.1)}, {{0, 1, 2, 3}});
}

TEST(Assembly, SingleCellCounts) {
  const QuadMesh m = single_cell();
  const DofMap d0 = build_dof_map(m, Method::Msmfe0);
  EXPECT_EQ(d0.num_stress(), 16);
  EXPECT_EQ(d0.num_displacement(), 2);
  EXPECT_EQ(d0.num_rotation(), 1);
  EXPECT_EQ(d0.num_total(), 19);
  const DofMap d1 = build_dof_map(m, Method::Msmfe1);
  EXPECT_EQ(d1.num_rotation(), 4);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(d1.vertex_block(v).size(), 4U);
}

TEST(Assembly, VertexBlockSizes) {
  const QuadMesh m = generate_uniform(3);
  const DofMap d = build_dof_map(m, Method::Msmfe1);
  EXPECT_EQ(d.num_stress(), 4 * m.num_edges());
  std::size_t total = 0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    EXPECT_EQ(d.vertex_block(v).size(), 2 * m.vertex_edges(v).size());
    for (std::size_t s = 0; s < d.vertex_block(v).size(); ++s) {
      const int dof = d.vertex_block(v)[s];
      EXPECT_EQ(d.block_slot(dof), static_cast<int>(s));
      EXPECT_EQ(d.stress_info(dof).vertex, v);
    }
    total += d.vertex_block(v).size();
  }
  EXPECT_EQ(total, static_cast<std::size_t>(d.num_stress()));
  // Corner vertices touch two edges, interior vertices four.
  EXPECT_EQ(d.vertex_block(0).size(), 4U);
  EXPECT_EQ(d.vertex_block(5).size(), 8U);
}

TEST(Assembly, NeumannUnknownsDropped) {
  const QuadMesh m = testing::uniform_with_neumann(4);
  const DofMap d = build_dof_map(m, Method::Msmfe0);
  EXPECT_EQ(d.num_stress(), 4 * m.num_edges() - 16);
  int constrained = 0;
  for (int e = 0; e < m.num_edges(); ++e) constrained += d.stress_dof(e, 0, 0) < 0 ? 1 : 0;
  EXPECT_EQ(constrained, 4);
}

TEST(Assembly, StressMatrixIsBlockDiagonalAndSymmetric) {
  for (const auto& [name, mesh] : testing::certificate_meshes()) {
    const DofMap d = build_dof_map(mesh, Method::Msmfe1);
    const auto sys = assemble(mesh, d, problem_data(TrigCase()));
    const SparseMatrix a = sys.stress_matrix();
    EXPECT_LT(SparseMatrix(a - SparseMatrix(a.transpose())).norm(), 1e-14 * a.norm()) << name;
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
        if (it.value() == 0.0) continue;
        EXPECT_EQ(d.stress_info(static_cast<int>(it.row())).vertex, d.stress_info(static_cast<int>(it.col())).vertex)
            << name;
      }
    }
  }
}

TEST(Assembly, DivergenceBlockEntries) {
  const QuadMesh m = generate_smooth(4);
  const DofMap d = build_dof_map(m, Method::Msmfe0);
  const auto sys = assemble(m, d, problem_data(TrigCase()));
  for (int k = 0; k < sys.a_su.outerSize(); ++k) {
    double sum = 0.0;
    int count = 0;
    for (SparseMatrix::InnerIterator it(sys.a_su, k); it; ++it) {
      EXPECT_NEAR(std::abs(it.value()), 0.5, 1e-13);
      sum += it.value();
      ++count;
    }
    const int edge = d.stress_info(k).edge;
    EXPECT_EQ(count, m.is_boundary_edge(edge) ? 1 : 2);
    if (!m.is_boundary_edge(edge)) EXPECT_NEAR(sum, 0.0, 1e-14);
  }
}

TEST(Assembly, RotationBlockSupport) {
  const QuadMesh m = generate_smooth(4);
  const DofMap d1 = build_dof_map(m, Method::Msmfe1);
  const auto s1 = assemble(m, d1, problem_data(TrigCase()));
  const SparseMatrix g1 = s1.a_sg;
  for (int k = 0; k < g1.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(g1, k); it; ++it) {
      EXPECT_EQ(d1.stress_info(static_cast<int>(it.col())).vertex, it.row());
    }
  }
  const DofMap d0 = build_dof_map(m, Method::Msmfe0);
  const auto s0 = assemble(m, d0, problem_data(TrigCase()));
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto local = d0.local_stress(m, c);
    int nonzero = 0;
    for (int j = 0; j < s0.a_sg.cols(); ++j) {
      if (s0.a_sg.coeff(c, j) == 0.0) continue;
      ++nonzero;
      EXPECT_NE(std::find(local.dof.begin(), local.dof.end(), j), local.dof.end());
    }
    EXPECT_LE(nonzero, 16);
  }
}

TEST(Assembly, Msmfe0RotationEntriesMatchPhysicalQuadrature) {
  const QuadMesh m = single_cell();
  const DofMap d = build_dof_map(m, Method::Msmfe0);
  const auto sys = assemble(m, d, problem_data(TrigCase()));
  const ElementGeometry g(m.cell_coords(0));
  const auto local = d.local_stress(m, 0);
  const auto rule = gauss_rule(6);
  for (int k = 0; k < 16; ++k) {
    double oracle = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& p = rule.points[q];
      const Mat2 tau = piola_stress(g, ReferenceBasis::instance().stress_value(k, p), p);
      oracle += rule.weights[q] * g.det(p) * (tau(0, 1) - tau(1, 0));
    }
    EXPECT_NEAR(sys.a_sg.coeff(0, local.dof[k]), local.sign[k] * oracle, 1e-13);
  }
}

TEST(Assembly, TrapezoidGramOracle) {
  const QuadMesh m = single_cell();
  const ElementGeometry g(m.cell_coords(0));
  const TensorOperator a = IsotropicCompliance(1.0, 2.0).matrix();
  const std::array<TensorOperator, 4> comp{a, a, a, a};
  const auto gram = element_trapezoid_gram(g, comp);
  const auto& basis = ReferenceBasis::instance();
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      double oracle = 0.0;
      for (int c = 0; c < 4; ++c) {
        const Point& p = reference_corners()[c];
        const Mat2 ti = piola_stress(g, basis.stress_value(i, p), p);
        const Mat2 tj = piola_stress(g, basis.stress_value(j, p), p);
        oracle += 0.25 * g.det(p) * flatten(ti).dot(a * flatten(tj));
      }
      EXPECT_NEAR(gram(i, j), oracle, 1e-14);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(gram)};
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Assembly, ExactGramOracle) {
  const QuadMesh m = single_cell();
  const ElementGeometry g(m.cell_coords(0));
  const TensorOperator a = IsotropicCompliance(1.0, 2.0).matrix();
  const auto gram = element_exact_gram(g, [a](const Point&) { return a; }, 5);
  const auto rule = gauss_rule(8);
  const auto& basis = ReferenceBasis::instance();
  for (int i : {0, 5, 11}) {
    for (int j : {0, 3, 14}) {
      double oracle = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& p = rule.points[q];
        const Mat2 ti = piola_stress(g, basis.stress_value(i, p), p);
        const Mat2 tj = piola_stress(g, basis.stress_value(j, p), p);
        oracle += rule.weights[q] * g.det(p) * flatten(ti).dot(a * flatten(tj));
      }
      EXPECT_NEAR(gram(i, j), oracle, 1e-6 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST(Assembly, ZeroDataGivesZeroRhs) {
  const QuadMesh m = generate_smooth(4);
  const DofMap d = build_dof_map(m, Method::Msmfe1);
  const auto sys = assemble(m, d, constant_data(Vec2::Zero(), Vec2::Zero()));
  EXPECT_EQ(sys.rhs_f.norm(), 0.0);
  EXPECT_EQ(sys.rhs_g.norm(), 0.0);
}

TEST(Assembly, ConstantLoadGivesCellAreas) {
  const QuadMesh m = generate_smooth(4);
  const DofMap d = build_dof_map(m, Method::Msmfe0);
  const Vec2 f(2.0, -3.0);
  for (LoadRule rule : {LoadRule::Gauss, LoadRule::Vertex}) {
    AssemblyOptions opts;
    opts.load = rule;
    const auto sys = assemble(m, d, constant_data(f, Vec2::Zero()), opts);
    for (int c = 0; c < m.num_cells(); ++c) {
      EXPECT_NEAR(sys.rhs_f(2 * c), f.x() * cell_area(m, c), 1e-14);
      EXPECT_NEAR(sys.rhs_f(2 * c + 1), f.y() * cell_area(m, c), 1e-14);
    }
  }
}

TEST(Assembly, ConstantBoundaryDataGivesHalfFluxes) {
  const QuadMesh m = generate_uniform(3);
  const DofMap d = build_dof_map(m, Method::Msmfe1);
  const Vec2 g(1.5, -0.5);
  const auto sys = assemble(m, d, constant_data(Vec2::Zero(), g));
  for (int k = 0; k < d.num_stress(); ++k) {
    const auto& info = d.stress_info(k);
    const double expected = m.is_boundary_edge(info.edge) ? 0.5 * std::abs(g(info.row)) : 0.0;
    EXPECT_NEAR(std::abs(sys.rhs_g(k)), expected, 1e-15);
  }
}

TEST(Assembly, BoundaryProjection) {
  const Point a(0.0, 0.0), b(1.0, 2.0);
  const auto quadratic = [](const Point& x) { return Vec2(x.x() * x.x(), 3.0 * x.y()); };
  const Vec2 mean = project_p0_boundary(quadratic, a, b);
  EXPECT_NEAR(mean.x(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mean.y(), 3.0, 1e-15);
}

TEST(Assembly, ExactStressMatrixIsSymmetricPositive) {
  const QuadMesh m = generate_smooth(4);
  const DofMap d = build_dof_map(m, Method::Msmfe1);
  const SparseMatrix a = assemble_stress_matrix_exact(m, d, TrigCase().compliance_field(), 4);
  EXPECT_LT(SparseMatrix(a - SparseMatrix(a.transpose())).norm(), 1e-14 * a.norm());
  EXPECT_TRUE(cholesky_succeeds(a));
}

TEST(Assembly, RejectsIndefiniteCompliance) {
  const QuadMesh m = generate_uniform(2);
  const DofMap d = build_dof_map(m, Method::Msmfe1);
  ProblemData data = constant_data(Vec2::Zero(), Vec2::Zero());
  data.compliance = [](const Point&) { return TensorOperator(-TensorOperator::Identity()); };
  EXPECT_ANY_THROW(assemble(m, d, data));
}

}  // namespace
}  // namespace msmfe
