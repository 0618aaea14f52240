#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msmfe/assembly.hpp"
#include "msmfe/solver.hpp"

namespace msmfe {

// Pointwise evaluation of discrete fields on a cell at a reference point.
Mat2 discrete_stress(const QuadMesh& mesh, const DofMap& dofs, const Vector& stress, int cell, const Point& ref);
Vec2 discrete_stress_divergence(const QuadMesh& mesh, const DofMap& dofs, const Vector& stress, int cell,
                                const Point& ref);
double discrete_rotation(const QuadMesh& mesh, const SolutionFields& fields, int cell, const Point& ref);

/// Error measures reported in the convergence tables, in table column order.
enum class ErrorColumn { Stress, StressDiv, Displacement, DisplacementProjection, Rotation };
inline constexpr int kErrorColumns = 5;

struct ErrorReport {
  // Absolute errors.
  double stress_l2 = 0.0;          // ||sigma - sigma_h||
  double stress_div = 0.0;         // ||div(sigma - sigma_h)||
  double displacement_l2 = 0.0;    // ||u - u_h||
  double displacement_proj = 0.0;  // ||Q_h u - u_h||
  double rotation_l2 = 0.0;        // ||gamma - gamma_h|| (rotation scalar)
  double projection_gap = 0.0;     // ||u - Q_h u||

  // The same measures applied to the exact fields (used for relative errors).
  double stress_norm = 0.0;
  double stress_div_norm = 0.0;
  double displacement_norm = 0.0;
  double displacement_proj_norm = 0.0;  // ||Q_h u||
  double rotation_norm = 0.0;

  double h = 0.0;
  int num_cells = 0;
  int num_stress = 0;
  int num_displacement = 0;
  int num_rotation = 0;

  [[nodiscard]] std::array<double, kErrorColumns> absolute() const;
  /// Each error divided by the matching norm of the exact solution.
  [[nodiscard]] std::array<double, kErrorColumns> relative() const;
};

enum class ErrorQuadrature { Gauss, IteratedTrapezoid };

enum class ProjectionRule {
  ReferenceMean,  // mean of u o F_E over the reference square
  CellCenter,     // u at F_E(1/2, 1/2), with the one-point rule for the norm
};

enum class DivergenceNorm {
  Full,      // ||div(sigma - sigma_h)|| over both rows
  RowSum,    // per cell, row norms added before the l2 sum over cells
  FirstRow,  // first stress row only
};

struct ErrorOptions {
  ErrorQuadrature quadrature = ErrorQuadrature::Gauss;
  int gauss_order = 4;
  int trapezoid_intervals = 3;
  ProjectionRule projection = ProjectionRule::ReferenceMean;
  DivergenceNorm divergence = DivergenceNorm::Full;

  /// Conventions under which the published convergence tables were produced:
  /// 4 x 4 composite trapezoid sampling, cell-center Q_h u, row-summed divergence.
  static ErrorOptions table_convention();
};

std::string_view to_string(ErrorQuadrature q);
std::string_view to_string(ProjectionRule p);
std::string_view to_string(DivergenceNorm d);

/// Errors of a computed solution against a manufactured case.
ErrorReport compute_errors(const QuadMesh& mesh, const DofMap& dofs, const SolutionFields& fields,
                           const ManufacturedCase& mcase, const ErrorOptions& options = {});

/// ln(e_prev / e_cur) / ln(h_prev / h_cur).
double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur);

struct ConvergenceRow {
  double h = 0.0;
  std::array<double, kErrorColumns> errors{};
  std::array<std::optional<double>, kErrorColumns> rates{};

  bool operator==(const ConvergenceRow&) const = default;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  bool operator==(const ConvergenceTable&) const = default;
};

/// Fills the rate columns; the first row has none. Requires decreasing h and positive errors.
ConvergenceTable compute_rates(std::vector<ConvergenceRow> rows);

/// "1/64" when 1/h is an integer, otherwise a decimal.
std::string h_label(double h);

/// Columns h, e_sigma, r_sigma, e_divsigma, r_divsigma, e_u, r_u, e_Qu, r_Qu, e_gamma, r_gamma.
std::string to_csv(const ConvergenceTable& table);
ConvergenceTable parse_csv(std::string_view text);
std::string to_markdown(const ConvergenceTable& table);

}  // namespace msmfe
