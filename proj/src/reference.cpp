#include "msmfe/reference.hpp"

#include <cmath>

namespace msmfe {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

constexpr std::array<double, 8> kMonomialDivergence = {0, 1, 0, 0, 0, 1, 0, 0};

}  // namespace

const std::array<Point, 4>& reference_corners() {
  static const std::array<Point, 4> corners = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
  return corners;
}

const std::array<Vec2, 4>& reference_normals() {
  static const std::array<Vec2, 4> normals = {Vec2(0, -1), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0)};
  return normals;
}

ElementGeometry::ElementGeometry(const std::array<Point, 4>& vertices)
    : r_(vertices),
      r21_(vertices[1] - vertices[0]),
      r41_(vertices[3] - vertices[0]),
      twist_((vertices[2] - vertices[3]) - (vertices[1] - vertices[0])) {}

Point ElementGeometry::map(const Point& ref) const {
  return r_[0] + r21_ * ref.x() + r41_ * ref.y() + twist_ * (ref.x() * ref.y());
}

Mat2 ElementGeometry::jacobian(const Point& ref) const {
  Mat2 df;
  df.col(0) = r21_ + twist_ * ref.y();
  df.col(1) = r41_ + twist_ * ref.x();
  return df;
}

double ElementGeometry::corner_triangle_area(int i) const {
  const Point& r = r_[i];
  return 0.5 * std::abs(cross(r_[(i + 1) % 4] - r, r_[(i + 3) % 4] - r));
}

double ElementGeometry::area() const { return 0.5 * cross(r_[2] - r_[0], r_[3] - r_[1]); }

bool ElementGeometry::is_parallelogram(double tol) const { return twist_.norm() <= tol; }

Mat2 piola_stress(const ElementGeometry& geometry, const Mat2& ref_tensor, const Point& ref) {
  const Mat2 df = geometry.jacobian(ref);
  const double j = df.determinant();
  if (!(j > 0.0)) throw DegenerateGeometry("piola_stress: nonpositive Jacobian");
  return ref_tensor * df.transpose() / j;
}

Mat2 pullback_stress(const ElementGeometry& geometry, const Mat2& tensor, const Point& ref) {
  const Mat2 df = geometry.jacobian(ref);
  const double j = df.determinant();
  if (!(j > 0.0)) throw DegenerateGeometry("pullback_stress: nonpositive Jacobian");
  return j * tensor * df.inverse().transpose();
}

std::array<Vec2, 8> monomial_fields(const Point& ref) {
  const double x = ref.x(), y = ref.y();
  return {Vec2(1, 0),         Vec2(x, 0),          Vec2(y, 0), Vec2(0, 1), Vec2(0, x), Vec2(0, y),
          Vec2(x * x, -2 * x * y), Vec2(2 * x * y, -y * y)};
}

ReferenceBasis::ReferenceBasis() {
  Eigen::Matrix<double, 8, 8> dofs;
  for (int b = 0; b < kVectorCount; ++b) {
    const int edge = b / 2;
    const int corner = (edge + b % 2) % 4;
    const auto fields = monomial_fields(reference_corners()[corner]);
    for (int m = 0; m < 8; ++m) dofs(b, m) = fields[m].dot(reference_normals()[edge]);
  }
  coeff_ = dofs.fullPivLu().inverse();
  for (int b = 0; b < kVectorCount; ++b) {
    divergence_[b] = 0.0;
    for (int m = 0; m < 8; ++m) divergence_[b] += coeff_(m, b) * kMonomialDivergence[m];
  }
}

const ReferenceBasis& ReferenceBasis::instance() {
  static const ReferenceBasis basis;
  return basis;
}

std::array<int, 4> ReferenceBasis::corner_dofs(int i) {
  const int prev = (i + 3) % 4;
  return {stress_index(i, 0, 0), stress_index(i, 0, 1), stress_index(prev, 1, 0), stress_index(prev, 1, 1)};
}

Vec2 ReferenceBasis::vector_value(int b, const Point& ref) const {
  const auto fields = monomial_fields(ref);
  Vec2 v = Vec2::Zero();
  for (int m = 0; m < 8; ++m) v += coeff_(m, b) * fields[m];
  return v;
}

Mat2 ReferenceBasis::stress_value(int k, const Point& ref) const {
  Mat2 t = Mat2::Zero();
  t.row(row_of(k)) = vector_value(k / 2, ref).transpose();
  return t;
}

Vec2 ReferenceBasis::stress_divergence(int k) const {
  Vec2 d = Vec2::Zero();
  d(row_of(k)) = divergence_[k / 2];
  return d;
}

double ReferenceBasis::rotation_q1(int i, const Point& ref) {
  const double x = ref.x(), y = ref.y();
  switch (i) {
    case 0: return (1 - x) * (1 - y);
    case 1: return x * (1 - y);
    case 2: return x * y;
    default: return (1 - x) * y;
  }
}

double trapezoid_stress_stress(const ElementGeometry& geometry, std::span<const TensorOperator, 4> compliance,
                               std::span<const Mat2, 4> tau, std::span<const Mat2, 4> chi) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point& corner = reference_corners()[i];
    const Mat2 df = geometry.jacobian(corner);
    const double j = df.determinant();
    if (!(j > 0.0)) throw DegenerateGeometry("trapezoid_stress_stress: nonpositive Jacobian");
    const Mat2 tau_hat = pullback_stress(geometry, tau[i], corner);
    const Mat2 chi_hat = pullback_stress(geometry, chi[i], corner);
    const Eigen::Vector4d a_tau = compliance[i] * flatten(tau_hat * df.transpose() / j);
    sum += a_tau.dot(flatten(chi_hat * df.transpose()));
  }
  return 0.25 * sum;
}

double trapezoid_stress_stress_physical(const ElementGeometry& geometry,
                                        std::span<const TensorOperator, 4> compliance,
                                        std::span<const Mat2, 4> tau, std::span<const Mat2, 4> chi) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    sum += geometry.corner_triangle_area(i) * (compliance[i] * flatten(tau[i])).dot(flatten(chi[i]));
  }
  return 0.5 * sum;
}

double trapezoid_stress_rotation(const ElementGeometry& geometry, std::span<const Mat2, 4> tau,
                                 std::span<const double, 4> xi) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point& corner = reference_corners()[i];
    const Mat2 tau_hat = pullback_stress(geometry, tau[i], corner);
    sum += contract(tau_hat * geometry.jacobian(corner).transpose(), skew_from_scalar(xi[i]));
  }
  return 0.25 * sum;
}

double exact_div_pairing(const ElementGeometry& geometry, int stress_index, int component) {
  static const QuadratureRule rule = gauss_rule(2);
  const Vec2 ref_div = ReferenceBasis::instance().stress_divergence(stress_index);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double j = geometry.det(rule.points[q]);
    if (!(j > 0.0)) throw DegenerateGeometry("exact_div_pairing: nonpositive Jacobian");
    sum += rule.weights[q] * j * (ref_div(component) / j);
  }
  return sum;
}

}  // namespace msmfe
