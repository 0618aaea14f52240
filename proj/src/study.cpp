#include "msmfe/study.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace msmfe {
namespace {

constexpr std::string_view kFilePrefix = "file:";

bool is_file_family(const std::string& family) { return family.rfind(kFilePrefix, 0) == 0; }

std::string mesh_path(const RunConfig& config) {
  if (is_file_family(config.family)) return config.family.substr(kFilePrefix.size());
  return config.mesh_file;
}

int parse_int(std::string_view text) {
  std::size_t used = 0;
  const std::string copy(text);
  int value = 0;
  try {
    value = std::stoi(copy, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad level '" + copy + "'");
  }
  if (used != copy.size()) throw std::invalid_argument("bad level '" + copy + "'");
  return value;
}

}  // namespace

std::vector<int> parse_levels(std::string_view text) {
  std::vector<int> levels;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const int first = parse_int(text.substr(0, dots));
    const int last = parse_int(text.substr(dots + 2));
    if (last < first) throw std::invalid_argument("empty level range");
    for (int l = first; l <= last; ++l) levels.push_back(l);
    return levels;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    levels.push_back(parse_int(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return levels;
}

Conventions parse_conventions(std::string_view name) {
  if (name == "standard") return Conventions::Standard;
  if (name == "table") return Conventions::Table;
  throw std::invalid_argument("unknown conventions '" + std::string(name) + "'");
}

void apply_conventions(RunConfig& config, Conventions conventions) {
  if (conventions == Conventions::Table) {
    config.assembly = AssemblyOptions::table_convention();
    config.errors = ErrorOptions::table_convention();
  } else {
    config.assembly = AssemblyOptions{};
    config.errors = ErrorOptions{};
  }
}

void validate(const RunConfig& config) {
  const auto& f = config.family;
  if (f != "square" && f != "smooth" && f != "h2par" && !is_file_family(f)) {
    throw std::invalid_argument("unknown mesh family '" + f + "'");
  }
  if (config.levels.empty()) throw std::invalid_argument("no levels given");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (config.levels[i] < 0) throw std::invalid_argument("levels must be nonnegative");
    if (i > 0 && config.levels[i] <= config.levels[i - 1]) {
      throw std::invalid_argument("levels must be strictly increasing");
    }
  }
  if ((f == "square" || f == "smooth") && config.levels.back() > 12) {
    throw std::invalid_argument("level too large");
  }
  if (is_file_family(f)) {
    const std::string path = mesh_path(config);
    if (path.empty() || !std::ifstream(path)) throw std::invalid_argument("cannot read mesh file '" + path + "'");
  }
  (void)make_case(config.case_name);
}

QuadMesh h2par_coarse_mesh() {
  std::vector<Point> vertices;
  for (int j = 0; j <= 3; ++j) {
    for (int i = 0; i <= 3; ++i) vertices.emplace_back(i / 3.0, j / 3.0);
  }
  vertices[1] = Point(0.38, 0.0);
  vertices[7] = Point(1.0, 0.30);
  vertices[5] = Point(0.30, 0.36);
  vertices[6] = Point(0.70, 0.31);
  vertices[9] = Point(0.36, 0.70);
  vertices[10] = Point(0.64, 0.62);
  vertices[14] = Point(0.60, 1.0);
  std::vector<std::array<int, 4>> cells;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const int v = 4 * j + i;
      cells.push_back({v, v + 1, v + 5, v + 4});
    }
  }
  return QuadMesh(std::move(vertices), std::move(cells));
}

QuadMesh build_level_mesh(const RunConfig& config, int level) {
  if (config.family == "square") return generate_uniform(1 << level);
  if (config.family == "smooth") return generate_smooth(1 << level);
  QuadMesh mesh = config.family == "h2par" ? h2par_coarse_mesh() : read_mesh_file(mesh_path(config));
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

double nominal_h(const RunConfig& config, int level) {
  if (config.family == "square" || config.family == "smooth") return std::ldexp(1.0, -level);
  if (config.family == "h2par") return std::ldexp(1.0 / 3.0, -level);
  return std::ldexp(read_mesh_file(mesh_path(config)).h(), -level);
}

SingleRun run_single(const RunConfig& config, int level) {
  const auto start = std::chrono::steady_clock::now();
  const auto mcase = make_case(config.case_name);
  QuadMesh mesh = build_level_mesh(config, level);
  DofMap dofs = build_dof_map(mesh, config.method);
  const AssembledSystem system = assemble(mesh, dofs, problem_data(*mcase), config.assembly);
  SolveStats stats;
  SolutionFields fields = solve_problem(system, dofs, config.solver, &stats);
  ErrorReport report = compute_errors(mesh, dofs, fields, *mcase, config.errors);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return SingleRun{std::move(mesh), std::move(dofs), std::move(fields), report, stats, seconds};
}

StudyResult run_study(const RunConfig& config) {
  validate(config);
  StudyResult result;
  std::vector<ConvergenceRow> rows;
  for (const int level : config.levels) {
    try {
      const SingleRun run = run_single(config, level);
      ConvergenceRow row;
      row.h = nominal_h(config, level);
      row.errors = config.relative_errors ? run.report.relative() : run.report.absolute();
      rows.push_back(row);
      result.reports.push_back(run.report);
      result.stats.push_back(run.stats);
      result.seconds.push_back(run.seconds);
    } catch (const std::exception& e) {
      throw Error("level " + std::to_string(level) + ": " + e.what());
    }
  }
  result.table = compute_rates(std::move(rows));
  return result;
}

std::vector<LevelQuality> mesh_report_levels(const RunConfig& config) {
  validate(config);
  std::vector<LevelQuality> out;
  for (const int level : config.levels) out.push_back({level, quality_report(build_level_mesh(config, level))});
  return out;
}

}  // namespace msmfe
