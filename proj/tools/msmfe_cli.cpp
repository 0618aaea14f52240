// msmfe: multipoint stress mixed finite element solver for 2D elasticity.
//
//   msmfe converge --method msmfe1 --family square --levels 1..6 --out-csv square.csv
//   msmfe run --family smooth --levels 3 --out-vtk smooth.vtk
//   msmfe mesh-report --family h2par --levels 0..4

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "msmfe/study.hpp"
#include "msmfe/vtk_writer.hpp"

namespace {

struct Options {
  std::string method = "msmfe1";
  std::string family = "square";
  std::string levels = "1..6";
  std::string case_name = "trig-dirichlet";
  std::string solver = "auto";
  double tol = 1e-12;
  int max_iters = 0;
  int gauss_order = 0;
  int intervals = 0;
  std::string conventions = "standard";
  std::string quadrature;
  std::string projection;
  std::string div_norm;
  std::string load;
  std::string boundary;
  bool absolute = false;
  std::string out_csv;
  std::string out_vtk;
  std::string mesh_file;
  std::string out_mesh;
};

msmfe::RunConfig to_config(const Options& o) {
  msmfe::RunConfig c;
  c.method = msmfe::parse_method(o.method);
  c.family = o.family;
  if (!o.mesh_file.empty() && o.family != "h2par" && o.family.rfind("file:", 0) != 0) {
    c.family = "file:" + o.mesh_file;
  }
  c.mesh_file = o.mesh_file;
  c.levels = msmfe::parse_levels(o.levels);
  c.case_name = o.case_name;
  c.solver.kind = msmfe::parse_solver_kind(o.solver);
  c.solver.tol = o.tol;
  c.solver.max_iters = o.max_iters;
  msmfe::apply_conventions(c, msmfe::parse_conventions(o.conventions));
  if (o.gauss_order > 0) c.errors.gauss_order = o.gauss_order;
  if (o.intervals > 0) c.errors.trapezoid_intervals = o.intervals;
  if (!o.quadrature.empty()) {
    c.errors.quadrature =
        o.quadrature == "gauss" ? msmfe::ErrorQuadrature::Gauss : msmfe::ErrorQuadrature::IteratedTrapezoid;
  }
  if (!o.projection.empty()) {
    c.errors.projection =
        o.projection == "center" ? msmfe::ProjectionRule::CellCenter : msmfe::ProjectionRule::ReferenceMean;
  }
  if (!o.div_norm.empty()) {
    c.errors.divergence = o.div_norm == "full"      ? msmfe::DivergenceNorm::Full
                          : o.div_norm == "row-sum" ? msmfe::DivergenceNorm::RowSum
                                                    : msmfe::DivergenceNorm::FirstRow;
  }
  if (!o.load.empty()) c.assembly.load = o.load == "gauss" ? msmfe::LoadRule::Gauss : msmfe::LoadRule::Vertex;
  if (!o.boundary.empty()) {
    c.assembly.boundary = o.boundary == "mean" ? msmfe::BoundaryRule::EdgeMean : msmfe::BoundaryRule::EdgeMidpoint;
  }
  c.relative_errors = !o.absolute;
  c.out_csv = o.out_csv;
  c.out_vtk = o.out_vtk;
  return c;
}

int cmd_converge(const msmfe::RunConfig& config) {
  const auto result = msmfe::run_study(config);
  std::cout << to_string(config.method) << " on " << config.family << " meshes ("
            << (config.relative_errors ? "relative" : "absolute") << " errors)\n\n";
  std::cout << msmfe::to_markdown(result.table) << '\n';
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    std::printf("level %d: cells %d, reduced size %d, solver %s, %.3f s\n", config.levels[i], r.num_cells,
                result.stats[i].reduced_size, std::string(to_string(result.stats[i].kind)).c_str(),
                result.seconds[i]);
  }
  if (!config.out_csv.empty()) {
    std::ofstream out(config.out_csv);
    out << msmfe::to_csv(result.table);
    if (!out) throw msmfe::Error("failed writing '" + config.out_csv + "'");
  }
  return 0;
}

int cmd_run(const msmfe::RunConfig& config) {
  msmfe::validate(config);
  const int level = config.levels.back();
  const auto run = msmfe::run_single(config, level);
  const auto errors = config.relative_errors ? run.report.relative() : run.report.absolute();
  std::printf("%s, %s level %d: %d cells, %d stress / %d displacement / %d rotation unknowns\n",
              std::string(to_string(config.method)).c_str(), config.family.c_str(), level, run.mesh.num_cells(),
              run.dofs.num_stress(), run.dofs.num_displacement(), run.dofs.num_rotation());
  std::printf("errors: sigma %.3e  div %.3e  u %.3e  Qu %.3e  gamma %.3e\n", errors[0], errors[1], errors[2],
              errors[3], errors[4]);
  std::printf("range: u_x [%.4g, %.4g]  gamma [%.4g, %.4g]\n", run.fields.displacement(Eigen::seq(0, Eigen::last, 2)).minCoeff(),
              run.fields.displacement(Eigen::seq(0, Eigen::last, 2)).maxCoeff(), run.fields.rotation.minCoeff(),
              run.fields.rotation.maxCoeff());
  if (!config.out_vtk.empty()) msmfe::write_vtk_file(config.out_vtk, run.mesh, run.dofs, run.fields);
  return 0;
}

int cmd_mesh_report(const msmfe::RunConfig& config, const std::string& out_mesh) {
  const auto levels = msmfe::mesh_report_levels(config);
  std::printf("%6s %12s %14s %14s %12s %6s\n", "level", "h", "max defect", "defect/h^2", "m2 ratio", "M1");
  double previous_ratio = -1.0;
  for (const auto& [level, r] : levels) {
    std::printf("%6d %12.4e %14.6e %14.6e %12.4e %6zu\n", level, r.h, r.max_parallelogram_defect,
                r.max_parallelogram_defect / (r.h * r.h), r.m2_max_ratio, r.m1_violations.size());
    if (previous_ratio > 0.0 && r.m2_max_ratio > 1.5 * previous_ratio) {
      std::printf("warning: m2 ratio grows at level %d\n", level);
    }
    previous_ratio = r.m2_max_ratio;
  }
  if (!out_mesh.empty()) {
    std::ofstream out(out_mesh);
    msmfe::write_mesh(out, msmfe::build_level_mesh(config, config.levels.back()));
    if (!out) throw msmfe::Error("failed writing '" + out_mesh + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipoint stress mixed finite elements for 2D elasticity"};
  app.set_config("--config", "", "key=value file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--method", o.method, "msmfe0 or msmfe1")->capture_default_str();
  app.add_option("--family", o.family, "square, smooth, h2par or file:<path>")->capture_default_str();
  app.add_option("--levels", o.levels, "refinement levels, e.g. 1..6 or 2,3")->capture_default_str();
  app.add_option("--case", o.case_name, "manufactured case")->capture_default_str();
  app.add_option("--solver", o.solver, "auto, cholesky or cg")->capture_default_str();
  app.add_option("--tol", o.tol, "CG relative residual tolerance")->capture_default_str();
  app.add_option("--max-iters", o.max_iters, "CG iteration limit (0: automatic)");
  app.add_option("--gauss-order", o.gauss_order, "Gauss order for error norms");
  app.add_option("--trapezoid-intervals", o.intervals, "subintervals of the composite trapezoid error rule");
  app.add_option("--conventions", o.conventions, "standard, or table to match the published tables")
      ->check(CLI::IsMember({"standard", "table"}))
      ->capture_default_str();
  app.add_option("--load", o.load, "override load rule: gauss or vertex")->check(CLI::IsMember({"gauss", "vertex"}));
  app.add_option("--boundary", o.boundary, "override boundary data: mean or midpoint")
      ->check(CLI::IsMember({"mean", "midpoint"}));
  app.add_option("--quadrature", o.quadrature, "override: gauss or trapezoid")
      ->check(CLI::IsMember({"gauss", "trapezoid"}));
  app.add_option("--qu", o.projection, "override Q_h u: mean or center")->check(CLI::IsMember({"mean", "center"}));
  app.add_option("--div-norm", o.div_norm, "override: full, row-sum or first-row")
      ->check(CLI::IsMember({"full", "row-sum", "first-row"}));
  app.add_flag("--absolute", o.absolute, "report absolute instead of relative errors");
  app.add_option("--out-csv", o.out_csv, "convergence table CSV");
  app.add_option("--out-vtk", o.out_vtk, "VTK output of the finest level");
  app.add_option("--mesh-file", o.mesh_file, "coarse mesh file (family file)");

  auto* converge = app.add_subcommand("converge", "convergence study over a mesh family");
  auto* run = app.add_subcommand("run", "single solve on the last level, optional VTK output");
  auto* report = app.add_subcommand("mesh-report", "mesh quality per level");
  report->add_option("--out-mesh", o.out_mesh, "write the last level in the plain-text mesh format");

  CLI11_PARSE(app, argc, argv);

  try {
    const msmfe::RunConfig config = to_config(o);
    if (converge->parsed()) return cmd_converge(config);
    if (run->parsed()) return cmd_run(config);
    if (report->parsed()) return cmd_mesh_report(config, o.out_mesh);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
