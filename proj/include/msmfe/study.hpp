#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "msmfe/analysis.hpp"
#include "msmfe/solver.hpp"

namespace msmfe {

/// Settings of a single solve or a convergence study.
///
/// family is one of square, smooth, h2par or file:<path>. Level l means:
///   square, smooth  n = 2^l cells per side (h = 1/2^l)
///   h2par, file     the coarse mesh refined l times (h2par: h = 1/(3 * 2^l))
struct RunConfig {
  Method method = Method::Msmfe1;
  std::string family = "square";
  std::vector<int> levels;
  std::string case_name = "trig-dirichlet";
  SolverConfig solver;
  AssemblyOptions assembly;
  ErrorOptions errors;
  bool relative_errors = true;
  std::string out_csv;
  std::string out_vtk;
  std::string mesh_file;
};

/// Standard: Gauss load, edge-mean boundary data, Gauss order 4 error norms.
/// Table: the assembly and error conventions behind the published tables.
enum class Conventions { Standard, Table };

Conventions parse_conventions(std::string_view name);
void apply_conventions(RunConfig& config, Conventions conventions);

/// Throws std::invalid_argument on an unknown family, bad levels or an unreadable mesh file.
void validate(const RunConfig& config);

/// "1..6", "2,3,5" or a single index.
std::vector<int> parse_levels(std::string_view text);

/// The bundled 3 x 3 coarse mesh of the unit square with perturbed, non-parallelogram cells.
QuadMesh h2par_coarse_mesh();

QuadMesh build_level_mesh(const RunConfig& config, int level);

/// Nominal mesh size used for the table labels and rates.
double nominal_h(const RunConfig& config, int level);

struct SingleRun {
  QuadMesh mesh;
  DofMap dofs;
  SolutionFields fields;
  ErrorReport report;
  SolveStats stats;
  double seconds = 0.0;
};

SingleRun run_single(const RunConfig& config, int level);

struct StudyResult {
  std::vector<ErrorReport> reports;
  std::vector<SolveStats> stats;
  std::vector<double> seconds;
  ConvergenceTable table;
};

/// Solves every level and tabulates errors (relative or absolute per config) and rates.
/// Failures are rethrown as Error with the level in the message.
StudyResult run_study(const RunConfig& config);

struct LevelQuality {
  int level = 0;
  MeshQualityReport report;
};

std::vector<LevelQuality> mesh_report_levels(const RunConfig& config);

}  // namespace msmfe
