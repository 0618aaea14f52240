#pragma once

#include <concepts>
#include <type_traits>

#include <array>
#include <span>
#include <vector>

#include "msmfe/types.hpp"

namespace msmfe {

// Reference square [0,1]^2 with corners (0,0), (1,0), (1,1), (0,1). Local edge k joins
// corners k and (k+1)%4.

struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Tensor-product Gauss-Legendre rule with `order` points per direction on [0,1]^2.
QuadratureRule gauss_rule(int order);

/// Gauss-Legendre rule on [0,1].
void gauss_rule_1d(int order, std::vector<double>& points, std::vector<double>& weights);

/// Vertex (trapezoidal) rule, weight 1/4 per corner.
QuadratureRule trapezoid_rule();

/// Composite trapezoid rule with `intervals` subintervals per direction on [0,1]^2.
QuadratureRule iterated_trapezoid_rule(int intervals);

/// Bilinear map F_E of a quadrilateral from the reference square.
class ElementGeometry {
 public:
  explicit ElementGeometry(const std::array<Point, 4>& vertices);

  [[nodiscard]] const std::array<Point, 4>& vertices() const { return r_; }
  [[nodiscard]] Point map(const Point& ref) const;
  /// DF_E = [r21, r41] + [(r34 - r21) y, (r34 - r21) x].
  [[nodiscard]] Mat2 jacobian(const Point& ref) const;
  [[nodiscard]] double det(const Point& ref) const { return jacobian(ref).determinant(); }
  /// Area of the triangle formed by the two edges meeting at corner i.
  [[nodiscard]] double corner_triangle_area(int i) const;
  [[nodiscard]] double area() const;
  [[nodiscard]] bool is_parallelogram(double tol = 0.0) const;

 private:
  std::array<Point, 4> r_;
  Vec2 r21_, r41_, twist_;
};

/// Corners of the reference square.
const std::array<Point, 4>& reference_corners();
/// Outward unit normals of the reference edges.
const std::array<Vec2, 4>& reference_normals();

/// Row-wise Piola transform: tau = (1/J) tau_hat DF^T at the reference point.
Mat2 piola_stress(const ElementGeometry& geometry, const Mat2& ref_tensor, const Point& ref);

template <typename RefFn>
  requires std::invocable<RefFn&, const Point&> && (!std::is_base_of_v<Eigen::MatrixBase<std::decay_t<RefFn>>, std::decay_t<RefFn>>)
Mat2 piola_stress(const ElementGeometry& geometry, RefFn&& ref_fn, const Point& ref) {
  return piola_stress(geometry, static_cast<Mat2>(ref_fn(ref)), ref);
}

/// Inverse of piola_stress: tau_hat = J tau DF^{-T}.
Mat2 pullback_stress(const ElementGeometry& geometry, const Mat2& tensor, const Point& ref);

/// The 16 nodal stress basis functions of the BDM1-type space, tensorized row-wise.
///
/// Index k = 4*edge + 2*endpoint + row. Basis k has row `row` equal to the vector BDM1
/// function whose normal component on `edge` is 1 at corner (edge + endpoint) % 4 and
/// vanishes at every other (edge, corner) pair; its other row is zero.
class ReferenceBasis {
 public:
  static constexpr int kStressCount = 16;
  static constexpr int kVectorCount = 8;

  static const ReferenceBasis& instance();

  static constexpr int stress_index(int edge, int endpoint, int row) { return 4 * edge + 2 * endpoint + row; }
  static constexpr int edge_of(int k) { return k / 4; }
  static constexpr int endpoint_of(int k) { return (k / 2) % 2; }
  static constexpr int row_of(int k) { return k % 2; }
  static constexpr int corner_of(int k) { return (edge_of(k) + endpoint_of(k)) % 4; }
  /// The four stress functions that do not vanish at reference corner i.
  static std::array<int, 4> corner_dofs(int i);

  /// Vector BDM1 function b = 2*edge + endpoint.
  [[nodiscard]] Vec2 vector_value(int b, const Point& ref) const;
  [[nodiscard]] double vector_divergence(int b) const { return divergence_[b]; }

  [[nodiscard]] Mat2 stress_value(int k, const Point& ref) const;
  /// Row-wise divergence (a constant vector).
  [[nodiscard]] Vec2 stress_divergence(int k) const;

  /// DOF functional k applied to a reference tensor field: (t(corner) n_edge)_row.
  template <typename TensorFn>
  static double apply_dof(int k, TensorFn&& field) {
    const Mat2 t = field(reference_corners()[corner_of(k)]);
    return (t * reference_normals()[edge_of(k)])(row_of(k));
  }

  /// Coefficients of the vector basis in the monomial fields
  /// (1,0) (x,0) (y,0) (0,1) (0,x) (0,y) curl(x^2 y) curl(x y^2).
  [[nodiscard]] const Eigen::Matrix<double, 8, 8>& coefficients() const { return coeff_; }

  static double rotation_q0(const Point&) { return 1.0; }
  /// Bilinear nodal function of corner i.
  static double rotation_q1(int i, const Point& ref);

 private:
  ReferenceBasis();

  Eigen::Matrix<double, 8, 8> coeff_;
  std::array<double, 8> divergence_{};
};

/// Evaluates the 8 monomial vector fields spanning one stress row.
std::array<Vec2, 8> monomial_fields(const Point& ref);

/// Trapezoidal (A tau, chi)_{Q,E} evaluated through the reference element. All arguments
/// are values at the four element vertices; tau and chi are physical tensors.
double trapezoid_stress_stress(const ElementGeometry& geometry, std::span<const TensorOperator, 4> compliance,
                               std::span<const Mat2, 4> tau, std::span<const Mat2, 4> chi);

/// The same form written on the physical element with corner-triangle weights.
double trapezoid_stress_stress_physical(const ElementGeometry& geometry,
                                        std::span<const TensorOperator, 4> compliance,
                                        std::span<const Mat2, 4> tau, std::span<const Mat2, 4> chi);

/// Trapezoidal (tau, xi)_{Q,E} with xi = [[0, p], [-p, 0]] given by its vertex scalars.
double trapezoid_stress_rotation(const ElementGeometry& geometry, std::span<const Mat2, 4> tau,
                                 std::span<const double, 4> xi);

/// (div tau_k, e_c)_E for reference stress function k and unit displacement e_c. Independent
/// of the geometry by the Piola identity; evaluated on the physical element.
double exact_div_pairing(const ElementGeometry& geometry, int stress_index, int component);

}  // namespace msmfe
