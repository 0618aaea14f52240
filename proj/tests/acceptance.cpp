// Acceptance checks: one PASS/FAIL line per primary criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "msmfe/analysis.hpp"
#include "msmfe/study.hpp"

namespace {

using namespace msmfe;

using Columns = std::array<double, kErrorColumns>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Compares a computed study against published errors (5% per entry) and finest rates (0.05).
Outcome compare_table(const StudyResult& r, const std::vector<Columns>& expected, const Columns& rates,
                      double seconds, double budget) {
  Outcome o;
  std::ostringstream msg;
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    for (int c = 0; c < kErrorColumns; ++c) {
      const double rel = std::abs(r.table.rows[i].errors[c] / expected[i][c] - 1.0);
      worst = std::max(worst, rel);
      if (rel > 0.05) {
        o.pass = false;
        msg << " [h=" << h_label(r.table.rows[i].h) << " col " << c << " got " << r.table.rows[i].errors[c]
            << " want " << expected[i][c] << "]";
      }
    }
  }
  const auto& last = r.table.rows.back();
  double worst_rate = 0.0;
  for (int c = 0; c < kErrorColumns; ++c) {
    const double d = std::abs(*last.rates[c] - rates[c]);
    worst_rate = std::max(worst_rate, d);
    if (d > 0.05) {
      o.pass = false;
      msg << " [rate col " << c << " got " << *last.rates[c] << " want " << rates[c] << "]";
    }
  }
  if (seconds > budget) {
    o.pass = false;
    msg << " [time " << seconds << " s over " << budget << " s]";
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel error deviation %.3f, max rate deviation %.3f, %.1f s", worst, worst_rate,
                seconds);
  o.detail = buf + msg.str();
  return o;
}

StudyResult run_table(const std::string& family, const std::vector<int>& levels, DivergenceNorm div) {
  RunConfig config;
  config.method = Method::Msmfe1;
  config.family = family;
  config.levels = levels;
  apply_conventions(config, Conventions::Table);
  config.errors.divergence = div;
  return run_study(config);
}

Outcome square_table() {
  // The divergence column of this table is reproduced by the first-row norm.
  const std::vector<Columns> expected = {
      {7.61e-01, 9.73e-01, 7.19e-01, 4.76e-01, 8.17e-01}, {3.74e-01, 5.42e-01, 4.56e-01, 1.06e-01, 3.91e-01},
      {1.66e-01, 2.72e-01, 2.33e-01, 2.76e-02, 1.15e-01}, {7.91e-02, 1.36e-01, 1.17e-01, 7.25e-03, 3.04e-02},
      {3.90e-02, 6.79e-02, 5.86e-02, 1.84e-03, 7.75e-03}, {1.94e-02, 3.39e-02, 2.93e-02, 4.62e-04, 1.95e-03}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_table("square", {1, 2, 3, 4, 5, 6}, DivergenceNorm::FirstRow);
  return compare_table(r, expected, {1.01, 1.00, 1.00, 1.99, 1.99}, seconds_since(t0), 60.0);
}

Outcome smooth_table() {
  const std::vector<Columns> expected = {
      {4.27e-01, 6.22e-01, 4.71e-01, 1.64e-01, 4.53e-01}, {2.22e-01, 3.46e-01, 2.68e-01, 7.09e-02, 2.14e-01},
      {1.12e-01, 1.78e-01, 1.37e-01, 2.51e-02, 9.29e-02}, {5.61e-02, 9.00e-02, 6.84e-02, 7.35e-03, 3.21e-02},
      {2.81e-02, 4.51e-02, 3.42e-02, 1.94e-03, 1.04e-02}, {1.40e-02, 2.26e-02, 1.71e-02, 4.93e-04, 3.41e-03}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_table("smooth", {2, 3, 4, 5, 6, 7}, DivergenceNorm::RowSum);
  return compare_table(r, expected, {1.00, 1.00, 1.00, 1.98, 1.61}, seconds_since(t0), 300.0);
}

Outcome nonparallelogram_pattern() {
  const auto r = run_table("file:" + std::string(MSMFE_DATA_DIR) + "/h2par_coarse.mesh", {0, 1, 2, 3, 4, 5},
                           DivergenceNorm::RowSum);
  const auto& rates = r.table.rows.back().rates;
  Outcome o;
  for (int c = 0; c < 3; ++c) o.pass = o.pass && *rates[c] >= 0.9 && *rates[c] <= 1.1;
  o.pass = o.pass && *rates[3] >= 1.8 && *rates[3] <= 2.1 && *rates[4] >= 1.4;
  char buf[160];
  std::snprintf(buf, sizeof buf, "finest rates %.2f %.2f %.2f %.2f %.2f (6 levels from bundled coarse mesh)",
                *rates[0], *rates[1], *rates[2], *rates[3], *rates[4]);
  o.detail = buf;
  return o;
}

double relative_difference(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

Outcome oracle_equivalence() {
  double worst = 0.0;
  int runs = 0;
  for (Method method : {Method::Msmfe0, Method::Msmfe1}) {
    for (int n : {2, 4}) {
      for (const QuadMesh& mesh : {generate_uniform(n), generate_smooth(n)}) {
        const DofMap dofs = build_dof_map(mesh, method);
        const auto sys = assemble(mesh, dofs, problem_data(TrigCase()));
        const auto reduced = solve_problem(sys, dofs);
        const auto oracle = solve_saddle_oracle(sys);
        worst = std::max({worst, relative_difference(reduced.stress, oracle.stress),
                          relative_difference(reduced.displacement, oracle.displacement),
                          relative_difference(reduced.rotation, oracle.rotation)});
        ++runs;
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%d solves, max relative difference %.2e", runs, worst);
  return {worst <= 1e-8, buf};
}

std::vector<QuadMesh> certificate_meshes() {
  std::vector<QuadMesh> out = {generate_uniform(2), generate_uniform(4), generate_uniform(8),
                               generate_smooth(4),  generate_smooth(8),  h2par_coarse_mesh(),
                               refine_uniform(h2par_coarse_mesh())};
  out.push_back(generate_uniform(4).with_boundary_kinds([](const Point& mid) {
    return mid.x() > 1.0 - 1e-12 ? BoundaryKind::Neumann : BoundaryKind::Dirichlet;
  }));
  return out;
}

Outcome spd_sparsity() {
  int meshes = 0;
  std::ostringstream msg;
  bool pass = true;
  for (const QuadMesh& mesh : certificate_meshes()) {
    ++meshes;
    for (Method method : {Method::Msmfe0, Method::Msmfe1}) {
      const DofMap dofs = build_dof_map(mesh, method);
      const auto sys = assemble(mesh, dofs, problem_data(TrigCase()));
      for (const auto& block : sys.stress_blocks) {
        if (block.dofs.empty()) continue;
        if (Eigen::LLT<Eigen::MatrixXd>(block.matrix).info() != Eigen::Success) {
          pass = false;
          msg << " [block " << block.vertex << " not SPD]";
        }
      }
      const SparseMatrix a = sys.stress_matrix();
      for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
          if (it.value() != 0.0 && dofs.stress_info(static_cast<int>(it.row())).vertex !=
                                       dofs.stress_info(static_cast<int>(it.col())).vertex) {
            pass = false;
          }
        }
      }
      ReducedSystem reduced = eliminate_stress(sys, dofs);
      if (method == Method::Msmfe1) {
        for (int k = 0; k < sys.a_sg.outerSize(); ++k) {
          for (SparseMatrix::InnerIterator it(sys.a_sg, k); it; ++it) {
            if (dofs.stress_info(static_cast<int>(it.col())).vertex != it.row()) pass = false;
          }
        }
        reduced = eliminate_rotation(std::move(reduced));
      }
      if (!cholesky_succeeds(reduced.matrix)) {
        pass = false;
        msg << " [" << to_string(method) << " reduced matrix not SPD]";
      }
    }
  }
  return {pass, std::to_string(meshes) + " meshes x 2 methods" + msg.str()};
}

Outcome constraint_residuals() {
  // Default (Gauss) load: the discrete divergence equals the cell mean of f.
  double div_worst = 0.0, sym0_worst = 0.0, sym1_worst = 0.0;
  for (const QuadMesh& mesh : {generate_smooth(8), refine_uniform(h2par_coarse_mesh())}) {
    for (Method method : {Method::Msmfe0, Method::Msmfe1}) {
      const DofMap dofs = build_dof_map(mesh, method);
      const auto sys = assemble(mesh, dofs, problem_data(TrigCase()));
      const auto fields = solve_problem(sys, dofs);
      const Vector div = sys.a_su * fields.stress - sys.rhs_f;
      div_worst = std::max(div_worst, div.cwiseAbs().maxCoeff() / sys.rhs_f.norm());
      const double scale = fields.stress.cwiseAbs().maxCoeff();
      const double sym = (sys.a_sg * fields.stress).cwiseAbs().maxCoeff() / scale;
      (method == Method::Msmfe0 ? sym0_worst : sym1_worst) = std::max(method == Method::Msmfe0 ? sym0_worst : sym1_worst, sym);
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "divergence %.2e (rel. to ||f||), MSMFE-0 symmetry means %.2e, MSMFE-1 pairings %.2e (rel. to max stress dof)",
                div_worst, sym0_worst, sym1_worst);
  return {div_worst <= 1e-9 && sym0_worst <= 1e-10 && sym1_worst <= 1e-10, buf};
}

Outcome kernel_properties() {
  std::ostringstream msg;
  bool pass = true;
  const auto rule = trapezoid_rule();
  auto integrate = [&](auto f) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(rule.points[q]);
    return s;
  };
  const double e_bilinear = std::max({std::abs(integrate([](const Point&) { return 1.0; }) - 1.0),
                                      std::abs(integrate([](const Point& p) { return p.x(); }) - 0.5),
                                      std::abs(integrate([](const Point& p) { return p.y(); }) - 0.5),
                                      std::abs(integrate([](const Point& p) { return p.x() * p.y(); }) - 0.25)});
  const double x2 = integrate([](const Point& p) { return p.x() * p.x(); });
  pass = pass && e_bilinear <= 1e-14 && std::abs(x2 - 0.5) <= 1e-14;
  msg << "bilinear err " << e_bilinear << ", x^2 -> " << x2 << " (exact 1/3)";

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto tensor = [&] {
    Mat2 t;
    t << d(rng), d(rng), d(rng), d(rng);
    return t;
  };
  double form_worst = 0.0, trace_worst = 0.0, round_worst = 0.0;
  const IsotropicCompliance material(123.0, 79.3);
  for (int s = 0; s < 1000; ++s) {
    std::array<Point, 4> r = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    for (auto& p : r) p += 0.2 * Point(d(rng), d(rng));
    const ElementGeometry g(r);
    std::array<TensorOperator, 4> a;
    std::array<Mat2, 4> tau, chi;
    for (int i = 0; i < 4; ++i) {
      TensorOperator m;
      for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = d(rng);
      a[i] = m * m.transpose() + TensorOperator::Identity();
      tau[i] = tensor();
      chi[i] = tensor();
    }
    const double ref = trapezoid_stress_stress(g, a, tau, chi);
    const double phys = trapezoid_stress_stress_physical(g, a, tau, chi);
    form_worst = std::max(form_worst, std::abs(ref - phys) / std::max(1.0, std::abs(ref)));

    const int e = s % 4;
    const Point a0 = reference_corners()[e];
    const Point a1 = reference_corners()[(e + 1) % 4];
    const Point at = a0 + 0.5 * (d(rng) + 1.0) * (a1 - a0);
    const Vec2 dx = g.jacobian(at) * (a1 - a0);
    const Vec2 n = Vec2(dx.y(), -dx.x()) / dx.norm();
    const Mat2 hat = tensor();
    trace_worst = std::max(trace_worst, (piola_stress(g, hat, at) * n * dx.norm() - hat * reference_normals()[e]).norm());

    const Mat2 t = tensor();
    round_worst = std::max(round_worst, (material.apply(material.inverse_apply(t)) - t).norm() / t.norm());
  }
  pass = pass && form_worst <= 1e-12 && trace_worst <= 1e-12 && round_worst <= 1e-13;
  msg << "; forms agree to " << form_worst << ", normal trace " << trace_worst << ", compliance round trip "
      << round_worst << " (1000 samples)";
  return {pass, msg.str()};
}

Outcome coercivity_band() {
  const TrigCase c;
  const ComplianceField compliance = c.compliance_field();
  double lo0 = 0.0, hi0 = 0.0;
  std::ostringstream msg;
  bool pass = true;
  for (int level = 2; level <= 5; ++level) {
    const QuadMesh mesh = generate_smooth(1 << level);
    double lo = 1e300, hi = 0.0;
    for (int cell = 0; cell < mesh.num_cells(); ++cell) {
      const ElementGeometry g(mesh.cell_coords(cell));
      std::array<TensorOperator, 4> a;
      for (int i = 0; i < 4; ++i) a[i] = compliance(mesh.vertex(mesh.cell(cell)[i]));
      const Eigen::MatrixXd trap = element_trapezoid_gram(g, a);
      const Eigen::MatrixXd exact = element_exact_gram(g, compliance, 4);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(trap, exact);
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
    if (level == 2) {
      lo0 = lo;
      hi0 = hi;
    } else if (lo < lo0 / 1.2 || hi > hi0 * 1.2) {
      pass = false;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "%sh=1/%d [%.4f, %.4f]", level == 2 ? "" : ", ", 1 << level, lo, hi);
    msg << buf;
  }
  return {pass && lo0 > 0.0, msg.str()};
}

}  // namespace

int main() {
  report("Square-grid table reproduction (MSMFE-1)", square_table);
  report("Smooth-grid table reproduction (MSMFE-1)", smooth_table);
  report("Non-parallelogram rate pattern (MSMFE-1)", nonparallelogram_pattern);
  report("Oracle equivalence", oracle_equivalence);
  report("SPD and sparsity certificates", spd_sparsity);
  report("Constraint residuals", constraint_residuals);
  report("Kernel properties", kernel_properties);
  report("Coercivity band", coercivity_band);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
