#include "msmfe/analysis.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace msmfe {
namespace {

Mat2 reference_stress(const DofMap::LocalStress& local, const Vector& stress, const Point& ref) {
  const auto& basis = ReferenceBasis::instance();
  Mat2 t = Mat2::Zero();
  for (int k = 0; k < ReferenceBasis::kStressCount; ++k) {
    if (local.dof[k] < 0) continue;
    t += local.sign[k] * stress(local.dof[k]) * basis.stress_value(k, ref);
  }
  return t;
}

Vec2 reference_divergence(const DofMap::LocalStress& local, const Vector& stress) {
  const auto& basis = ReferenceBasis::instance();
  Vec2 d = Vec2::Zero();
  for (int k = 0; k < ReferenceBasis::kStressCount; ++k) {
    if (local.dof[k] < 0) continue;
    d += local.sign[k] * stress(local.dof[k]) * basis.stress_divergence(k);
  }
  return d;
}

void check_sizes(const QuadMesh& mesh, const DofMap& dofs, const SolutionFields& fields) {
  const int expected_rotation = fields.method == Method::Msmfe0 ? mesh.num_cells() : mesh.num_vertices();
  if (fields.stress.size() != dofs.num_stress() || fields.displacement.size() != 2 * mesh.num_cells() ||
      fields.rotation.size() != expected_rotation || dofs.num_displacement() != 2 * mesh.num_cells()) {
    throw std::invalid_argument("compute_errors: solution fields do not match the mesh");
  }
}

}  // namespace

Mat2 discrete_stress(const QuadMesh& mesh, const DofMap& dofs, const Vector& stress, int cell, const Point& ref) {
  const ElementGeometry geometry(mesh.cell_coords(cell));
  return piola_stress(geometry, reference_stress(dofs.local_stress(mesh, cell), stress, ref), ref);
}

Vec2 discrete_stress_divergence(const QuadMesh& mesh, const DofMap& dofs, const Vector& stress, int cell,
                                const Point& ref) {
  const ElementGeometry geometry(mesh.cell_coords(cell));
  return reference_divergence(dofs.local_stress(mesh, cell), stress) / geometry.det(ref);
}

double discrete_rotation(const QuadMesh& mesh, const SolutionFields& fields, int cell, const Point& ref) {
  if (fields.method == Method::Msmfe0) return fields.rotation(cell);
  double p = 0.0;
  for (int i = 0; i < 4; ++i) p += fields.rotation(mesh.cell(cell)[i]) * ReferenceBasis::rotation_q1(i, ref);
  return p;
}

std::array<double, kErrorColumns> ErrorReport::absolute() const {
  return {stress_l2, stress_div, displacement_l2, displacement_proj, rotation_l2};
}

std::array<double, kErrorColumns> ErrorReport::relative() const {
  const std::array<double, kErrorColumns> norms = {stress_norm, stress_div_norm, displacement_norm,
                                                   displacement_proj_norm, rotation_norm};
  auto out = absolute();
  for (int i = 0; i < kErrorColumns; ++i) out[i] = norms[i] > 0.0 ? out[i] / norms[i] : out[i];
  return out;
}

ErrorOptions ErrorOptions::table_convention() {
  ErrorOptions o;
  o.quadrature = ErrorQuadrature::IteratedTrapezoid;
  o.trapezoid_intervals = 3;
  o.projection = ProjectionRule::CellCenter;
  o.divergence = DivergenceNorm::RowSum;
  return o;
}

std::string_view to_string(ErrorQuadrature q) {
  return q == ErrorQuadrature::Gauss ? "gauss" : "iterated-trapezoid";
}

std::string_view to_string(ProjectionRule p) {
  return p == ProjectionRule::ReferenceMean ? "reference-mean" : "cell-center";
}

std::string_view to_string(DivergenceNorm d) {
  switch (d) {
    case DivergenceNorm::Full: return "full";
    case DivergenceNorm::RowSum: return "row-sum";
    case DivergenceNorm::FirstRow: return "first-row";
  }
  return "full";
}

ErrorReport compute_errors(const QuadMesh& mesh, const DofMap& dofs, const SolutionFields& fields,
                           const ManufacturedCase& mcase, const ErrorOptions& options) {
  check_sizes(mesh, dofs, fields);
  const QuadratureRule rule = options.quadrature == ErrorQuadrature::Gauss
                                  ? gauss_rule(options.gauss_order)
                                  : iterated_trapezoid_rule(options.trapezoid_intervals);
  const Point center(0.5, 0.5);

  ErrorReport r;
  r.h = mesh.h();
  r.num_cells = mesh.num_cells();
  r.num_stress = dofs.num_stress();
  r.num_displacement = dofs.num_displacement();
  r.num_rotation = dofs.num_rotation();

  double s2 = 0, sn2 = 0, d2 = 0, dn2 = 0, u2 = 0, un2 = 0, q2 = 0, qn2 = 0, g2 = 0, gn2 = 0, gap2 = 0;
  std::vector<Vec2> u_at(rule.size());
  std::vector<double> wj_at(rule.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry geometry(mesh.cell_coords(c));
    const auto local = dofs.local_stress(mesh, c);
    const Vec2 div_hat = reference_divergence(local, fields.stress);
    const Vec2 u_h(fields.displacement(2 * c), fields.displacement(2 * c + 1));

    Vec2 mean = Vec2::Zero();
    double cell_area = 0.0;
    Vec2 div_err = Vec2::Zero(), div_ref = Vec2::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& p = rule.points[q];
      const Mat2 df = geometry.jacobian(p);
      const double j = df.determinant();
      if (!(j > 0.0)) throw DegenerateGeometry("compute_errors: inverted cell " + std::to_string(c));
      const double wj = rule.weights[q] * j;
      const Point x = geometry.map(p);

      const Vec2 u = mcase.displacement(x);
      const Mat2 sigma = mcase.stress(x);
      const Vec2 f = mcase.body_force(x);
      const double gamma = mcase.rotation(x);

      const Mat2 sigma_h = reference_stress(local, fields.stress, p) * df.transpose() / j;
      const Vec2 div_h = div_hat / j;
      const double gamma_h = discrete_rotation(mesh, fields, c, p);

      s2 += wj * (sigma - sigma_h).squaredNorm();
      sn2 += wj * sigma.squaredNorm();
      div_err += wj * (f - div_h).cwiseAbs2();
      div_ref += wj * f.cwiseAbs2();
      u2 += wj * (u - u_h).squaredNorm();
      un2 += wj * u.squaredNorm();
      g2 += wj * (gamma - gamma_h) * (gamma - gamma_h);
      gn2 += wj * gamma * gamma;

      mean += rule.weights[q] * u;
      cell_area += wj;
      u_at[q] = u;
      wj_at[q] = wj;
    }
    switch (options.divergence) {
      case DivergenceNorm::Full:
        d2 += div_err.sum();
        dn2 += div_ref.sum();
        break;
      case DivergenceNorm::RowSum:
        d2 += std::pow(std::sqrt(div_err(0)) + std::sqrt(div_err(1)), 2);
        dn2 += std::pow(std::sqrt(div_ref(0)) + std::sqrt(div_ref(1)), 2);
        break;
      case DivergenceNorm::FirstRow:
        d2 += div_err(0);
        dn2 += div_ref(0);
        break;
    }
    if (options.projection == ProjectionRule::CellCenter) {
      mean = mcase.displacement(geometry.map(center));
      cell_area = geometry.det(center);
    }
    q2 += cell_area * (mean - u_h).squaredNorm();
    qn2 += cell_area * mean.squaredNorm();
    for (std::size_t q = 0; q < rule.size(); ++q) gap2 += wj_at[q] * (u_at[q] - mean).squaredNorm();
  }

  r.stress_l2 = std::sqrt(s2);
  r.stress_norm = std::sqrt(sn2);
  r.stress_div = std::sqrt(d2);
  r.stress_div_norm = std::sqrt(dn2);
  r.displacement_l2 = std::sqrt(u2);
  r.displacement_norm = std::sqrt(un2);
  r.displacement_proj = std::sqrt(q2);
  r.displacement_proj_norm = std::sqrt(qn2);
  r.rotation_l2 = std::sqrt(g2);
  r.rotation_norm = std::sqrt(gn2);
  r.projection_gap = std::sqrt(gap2);
  return r;
}

double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur) {
  if (!(e_prev > 0.0) || !(e_cur > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
  if (!(h_prev > h_cur) || !(h_cur > 0.0)) throw std::invalid_argument("convergence_rate: h must decrease");
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

ConvergenceTable compute_rates(std::vector<ConvergenceRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int col = 0; col < kErrorColumns; ++col) {
      if (!(rows[i].errors[col] > 0.0)) {
        throw std::invalid_argument("compute_rates: nonpositive error in row " + std::to_string(i));
      }
      rows[i].rates[col] = std::nullopt;
      if (i > 0) {
        rows[i].rates[col] =
            convergence_rate(rows[i - 1].errors[col], rows[i].errors[col], rows[i - 1].h, rows[i].h);
      }
    }
  }
  return ConvergenceTable{std::move(rows)};
}

std::string h_label(double h) {
  const double inv = 1.0 / h;
  const double rounded = std::round(inv);
  char buf[64];
  if (rounded >= 1.0 && std::abs(inv - rounded) < 1e-9 * rounded) {
    std::snprintf(buf, sizeof buf, "1/%.0f", rounded);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", h);
  }
  return buf;
}

namespace {

constexpr std::array<const char*, kErrorColumns> kColumnNames = {"sigma", "divsigma", "u", "Qu", "gamma"};

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(std::string_view field) {
  std::string copy(field);
  std::size_t used = 0;
  const double value = std::stod(copy, &used);
  if (used != copy.size()) throw std::invalid_argument("parse_csv: bad number '" + copy + "'");
  return value;
}

}  // namespace

std::string to_csv(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "h";
  for (const char* name : kColumnNames) out << ",e_" << name << ",r_" << name;
  out << '\n';
  for (const auto& row : table.rows) {
    out << format_exact(row.h);
    for (int col = 0; col < kErrorColumns; ++col) {
      out << ',' << format_exact(row.errors[col]) << ',';
      if (row.rates[col]) out << format_exact(*row.rates[col]);
    }
    out << '\n';
  }
  return out.str();
}

ConvergenceTable parse_csv(std::string_view text) {
  ConvergenceTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("h,", 0) != 0) throw std::invalid_argument("parse_csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 1 + 2 * kErrorColumns) throw std::invalid_argument("parse_csv: wrong column count");
    ConvergenceRow row;
    row.h = parse_double(fields[0]);
    for (int col = 0; col < kErrorColumns; ++col) {
      row.errors[col] = parse_double(fields[1 + 2 * col]);
      const std::string& rate = fields[2 + 2 * col];
      if (!rate.empty()) row.rates[col] = parse_double(rate);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string to_markdown(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "| h | ||sigma-sigma_h|| | rate | ||div(sigma-sigma_h)|| | rate | ||u-u_h|| | rate | ||Q_h u-u_h|| | rate "
         "| ||gamma-gamma_h|| | rate |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  char buf[64];
  for (const auto& row : table.rows) {
    out << "| " << h_label(row.h);
    for (int col = 0; col < kErrorColumns; ++col) {
      std::snprintf(buf, sizeof buf, "%.2E", row.errors[col]);
      out << " | " << buf << " | ";
      if (row.rates[col]) {
        std::snprintf(buf, sizeof buf, "%.2f", *row.rates[col]);
        out << buf;
      } else {
        out << '-';
      }
    }
    out << " |\n";
  }
  return out.str();
}

}  // namespace msmfe
