#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "msmfe/analysis.hpp"
#include "msmfe/study.hpp"
#include "msmfe/vtk_writer.hpp"

namespace py = pybind11;
using namespace msmfe;

namespace {

Eigen::MatrixXd vertex_array(const QuadMesh& mesh) {
  Eigen::MatrixXd out(mesh.num_vertices(), 2);
  for (int v = 0; v < mesh.num_vertices(); ++v) out.row(v) = mesh.vertex(v).transpose();
  return out;
}

Eigen::MatrixXi cell_array(const QuadMesh& mesh) {
  Eigen::MatrixXi out(mesh.num_cells(), 4);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int i = 0; i < 4; ++i) out(c, i) = mesh.cell(c)[i];
  }
  return out;
}

QuadMesh mesh_from_arrays(const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& cells) {
  if (vertices.cols() != 2 || cells.cols() != 4) throw std::invalid_argument("expected (n, 2) vertices and (m, 4) cells");
  std::vector<Point> v(vertices.rows());
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) v[i] = vertices.row(i).transpose();
  std::vector<std::array<int, 4>> c(cells.rows());
  for (Eigen::Index i = 0; i < cells.rows(); ++i) c[i] = {cells(i, 0), cells(i, 1), cells(i, 2), cells(i, 3)};
  return QuadMesh(std::move(v), std::move(c));
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["stress_l2"] = r.stress_l2;
  d["stress_div"] = r.stress_div;
  d["displacement_l2"] = r.displacement_l2;
  d["displacement_proj"] = r.displacement_proj;
  d["rotation_l2"] = r.rotation_l2;
  d["projection_gap"] = r.projection_gap;
  d["stress_norm"] = r.stress_norm;
  d["stress_div_norm"] = r.stress_div_norm;
  d["displacement_norm"] = r.displacement_norm;
  d["displacement_proj_norm"] = r.displacement_proj_norm;
  d["rotation_norm"] = r.rotation_norm;
  d["h"] = r.h;
  d["num_cells"] = r.num_cells;
  d["num_stress"] = r.num_stress;
  d["num_displacement"] = r.num_displacement;
  d["num_rotation"] = r.num_rotation;
  d["relative"] = r.relative();
  return d;
}

RunConfig make_config(const std::string& method, const std::string& family, const std::vector<int>& levels,
                      const std::string& case_name, const std::string& conventions, const std::string& div_norm,
                      bool relative) {
  RunConfig c;
  c.method = parse_method(method);
  c.family = family;
  c.levels = levels;
  c.case_name = case_name;
  apply_conventions(c, parse_conventions(conventions));
  if (div_norm == "full") {
    c.errors.divergence = DivergenceNorm::Full;
  } else if (div_norm == "row-sum") {
    c.errors.divergence = DivergenceNorm::RowSum;
  } else if (div_norm == "first-row") {
    c.errors.divergence = DivergenceNorm::FirstRow;
  } else if (!div_norm.empty()) {
    throw std::invalid_argument("unknown divergence norm '" + div_norm + "'");
  }
  c.relative_errors = relative;
  return c;
}

}  // namespace

PYBIND11_MODULE(_msmfe, m) {
  m.doc() = "Multipoint stress mixed finite elements for 2D elasticity on quadrilaterals";

  py::register_exception<Error>(m, "MsmfeError", PyExc_RuntimeError);

  py::class_<QuadMesh>(m, "QuadMesh")
      .def(py::init(&mesh_from_arrays), py::arg("vertices"), py::arg("cells"))
      .def_property_readonly("num_vertices", &QuadMesh::num_vertices)
      .def_property_readonly("num_cells", &QuadMesh::num_cells)
      .def_property_readonly("num_edges", &QuadMesh::num_edges)
      .def_property_readonly("h", &QuadMesh::h)
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("cells", &cell_array)
      .def("refine", [](const QuadMesh& mesh) { return refine_uniform(mesh); })
      .def("to_text", [](const QuadMesh& mesh) {
        std::ostringstream out;
        write_mesh(out, mesh);
        return out.str();
      });

  m.def("generate_uniform", &generate_uniform, py::arg("n"), "n x n uniform mesh of the unit square");
  m.def("generate_smooth", &generate_smooth, py::arg("n"), "n x n mesh under the smooth vertex map");
  m.def("h2par_coarse_mesh", &h2par_coarse_mesh, "bundled 3 x 3 non-parallelogram coarse mesh");
  m.def("read_mesh", &read_mesh_file, py::arg("path"));
  m.def(
      "mesh_quality",
      [](const QuadMesh& mesh) {
        const auto q = quality_report(mesh);
        py::dict d;
        d["max_parallelogram_defect"] = q.max_parallelogram_defect;
        d["m1_violations"] = q.m1_violations;
        d["m2_max_ratio"] = q.m2_max_ratio;
        d["h"] = q.h;
        return d;
      },
      py::arg("mesh"));

  m.def(
      "solve",
      [](const QuadMesh& mesh, const std::string& method, const std::string& case_name,
         const std::string& conventions) {
        RunConfig c = make_config(method, "square", {0}, case_name, conventions, "", true);
        const auto mcase = make_case(case_name);
        const DofMap dofs = build_dof_map(mesh, c.method);
        const AssembledSystem system = assemble(mesh, dofs, problem_data(*mcase), c.assembly);
        SolveStats stats;
        const SolutionFields fields = solve_problem(system, dofs, c.solver, &stats);
        const ErrorReport report = compute_errors(mesh, dofs, fields, *mcase, c.errors);
        py::dict d;
        d["stress"] = fields.stress;
        d["displacement"] = fields.displacement;
        d["rotation"] = fields.rotation;
        d["errors"] = report_dict(report);
        d["reduced_size"] = stats.reduced_size;
        d["solver"] = std::string(to_string(stats.kind));
        return d;
      },
      py::arg("mesh"), py::arg("method") = "msmfe1", py::arg("case") = "trig-dirichlet",
      py::arg("conventions") = "standard", "solve the manufactured problem and report errors");

  m.def(
      "write_vtk",
      [](const QuadMesh& mesh, const std::string& method, const std::string& path) {
        const Method me = parse_method(method);
        const auto mcase = make_case("trig-dirichlet");
        const DofMap dofs = build_dof_map(mesh, me);
        const SolutionFields fields = solve_problem(assemble(mesh, dofs, problem_data(*mcase)), dofs);
        write_vtk_file(path, mesh, dofs, fields);
      },
      py::arg("mesh"), py::arg("method"), py::arg("path"));

  m.def(
      "convergence_study",
      [](const std::string& method, const std::string& family, const std::vector<int>& levels,
         const std::string& case_name, const std::string& conventions, const std::string& div_norm, bool relative) {
        const auto result = run_study(make_config(method, family, levels, case_name, conventions, div_norm, relative));
        py::list rows;
        for (const auto& row : result.table.rows) {
          py::dict d;
          d["h"] = row.h;
          d["label"] = h_label(row.h);
          d["errors"] = row.errors;
          d["rates"] = row.rates;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["csv"] = to_csv(result.table);
        out["markdown"] = to_markdown(result.table);
        return out;
      },
      py::arg("method") = "msmfe1", py::arg("family") = "square", py::arg("levels") = std::vector<int>{1, 2, 3, 4},
      py::arg("case") = "trig-dirichlet", py::arg("conventions") = "standard", py::arg("div_norm") = "",
      py::arg("relative") = true, "run a convergence study; columns are stress, div, u, Q_h u, rotation");

  m.def("convergence_rate", &convergence_rate, py::arg("e_prev"), py::arg("e_cur"), py::arg("h_prev"),
        py::arg("h_cur"));
  m.def("case_names", &case_names);
  m.def("parse_levels", [](const std::string& text) { return parse_levels(text); }, py::arg("text"));
}
