#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "msmfe/types.hpp"

namespace msmfe {

/// Pointwise compliance A(x) as an operator on (t11, t12, t21, t22).
using ComplianceField = std::function<TensorOperator(const Point&)>;

/// Homogeneous isotropic material:
///   A sigma = 1/(2 mu) (sigma - lambda / (2 mu + 2 lambda) tr(sigma) I),
///   A^{-1} eps = 2 mu eps + lambda tr(eps) I.
/// Requires mu > 0 and lambda > -mu.
class IsotropicCompliance {
 public:
  IsotropicCompliance(double lambda, double mu);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] Mat2 apply(const Mat2& sigma) const;
  [[nodiscard]] Mat2 inverse_apply(const Mat2& eps) const;
  [[nodiscard]] TensorOperator matrix() const;

 private:
  double lambda_;
  double mu_;
};

struct CaseSample {
  Vec2 u;
  Mat2 grad_u;  // grad_u(i, j) = d_j u_i
  Mat2 sigma;
  double gamma;  // (1,2) entry of Skew(grad u)
  Vec2 f;
};

/// Closed-form displacement with stress, rotation and body force derived from it.
/// Subclasses supply u and its first and second derivatives.
class ManufacturedCase {
 public:
  explicit ManufacturedCase(IsotropicCompliance material) : material_(material) {}
  virtual ~ManufacturedCase() = default;

  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual Vec2 displacement(const Point& x) const = 0;
  [[nodiscard]] virtual Mat2 displacement_gradient(const Point& x) const = 0;
  /// Hessians of u_0 and u_1.
  [[nodiscard]] virtual std::array<Mat2, 2> displacement_hessian(const Point& x) const = 0;

  [[nodiscard]] const IsotropicCompliance& material() const { return material_; }
  [[nodiscard]] CaseSample evaluate(const Point& x) const;
  [[nodiscard]] Mat2 stress(const Point& x) const;
  [[nodiscard]] double rotation(const Point& x) const;
  [[nodiscard]] Vec2 body_force(const Point& x) const;
  /// Dirichlet data: the exact displacement.
  [[nodiscard]] Vec2 dirichlet(const Point& x) const { return displacement(x); }
  [[nodiscard]] ComplianceField compliance_field() const;

 private:
  IsotropicCompliance material_;
};

/// u = (cos(pi x) sin(2 pi y), cos(pi y) sin(pi x)) with lambda = 123, mu = 79.3.
class TrigCase final : public ManufacturedCase {
 public:
  TrigCase() : ManufacturedCase(IsotropicCompliance(123.0, 79.3)) {}
  [[nodiscard]] std::string_view name() const override { return "trig-dirichlet"; }
  [[nodiscard]] Vec2 displacement(const Point& x) const override;
  [[nodiscard]] Mat2 displacement_gradient(const Point& x) const override;
  [[nodiscard]] std::array<Mat2, 2> displacement_hessian(const Point& x) const override;
};

/// Affine displacement: constant stress and zero body force.
class LinearPatchCase final : public ManufacturedCase {
 public:
  LinearPatchCase() : ManufacturedCase(IsotropicCompliance(123.0, 79.3)) {}
  [[nodiscard]] std::string_view name() const override { return "linear-patch"; }
  [[nodiscard]] Vec2 displacement(const Point& x) const override;
  [[nodiscard]] Mat2 displacement_gradient(const Point& x) const override;
  [[nodiscard]] std::array<Mat2, 2> displacement_hessian(const Point& x) const override;
};

using CaseFactory = std::function<std::unique_ptr<ManufacturedCase>()>;

/// Looks up a registered case by name; throws std::invalid_argument if unknown.
std::unique_ptr<ManufacturedCase> make_case(std::string_view name);
void register_case(std::string name, CaseFactory factory);
std::vector<std::string> case_names();

}  // namespace msmfe
