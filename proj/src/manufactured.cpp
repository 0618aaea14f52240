#include "msmfe/manufactured.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace msmfe {

IsotropicCompliance::IsotropicCompliance(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  if (!(mu > 0.0) || !(lambda > -mu)) {
    throw std::invalid_argument("IsotropicCompliance: need mu > 0 and lambda > -mu");
  }
}

Mat2 IsotropicCompliance::apply(const Mat2& sigma) const {
  const double shift = lambda_ / (2.0 * mu_ + 2.0 * lambda_) * sigma.trace();
  return (sigma - shift * Mat2::Identity()) / (2.0 * mu_);
}

Mat2 IsotropicCompliance::inverse_apply(const Mat2& eps) const {
  return 2.0 * mu_ * eps + lambda_ * eps.trace() * Mat2::Identity();
}

TensorOperator IsotropicCompliance::matrix() const {
  TensorOperator a;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d unit = Eigen::Vector4d::Zero();
    unit(k) = 1.0;
    a.col(k) = flatten(apply(unflatten(unit)));
  }
  return a;
}

CaseSample ManufacturedCase::evaluate(const Point& x) const {
  CaseSample s;
  s.u = displacement(x);
  s.grad_u = displacement_gradient(x);
  const Mat2 eps = 0.5 * (s.grad_u + s.grad_u.transpose());
  s.sigma = material_.inverse_apply(eps);
  s.gamma = 0.5 * (s.grad_u(0, 1) - s.grad_u(1, 0));
  s.f = body_force(x);
  return s;
}

Mat2 ManufacturedCase::stress(const Point& x) const {
  const Mat2 g = displacement_gradient(x);
  return material_.inverse_apply(0.5 * (g + g.transpose()));
}

double ManufacturedCase::rotation(const Point& x) const {
  const Mat2 g = displacement_gradient(x);
  return 0.5 * (g(0, 1) - g(1, 0));
}

Vec2 ManufacturedCase::body_force(const Point& x) const {
  // f_i = mu Lap(u_i) + (lambda + mu) d_i div(u)
  const auto hess = displacement_hessian(x);
  const double lambda = material_.lambda();
  const double mu = material_.mu();
  Vec2 f;
  for (int i = 0; i < 2; ++i) {
    const double grad_div = hess[0](i, 0) + hess[1](i, 1);
    f(i) = mu * hess[i].trace() + (lambda + mu) * grad_div;
  }
  return f;
}

ComplianceField ManufacturedCase::compliance_field() const {
  const TensorOperator a = material_.matrix();
  return [a](const Point&) { return a; };
}

Vec2 TrigCase::displacement(const Point& x) const {
  using std::numbers::pi;
  return {std::cos(pi * x.x()) * std::sin(2 * pi * x.y()), std::cos(pi * x.y()) * std::sin(pi * x.x())};
}

Mat2 TrigCase::displacement_gradient(const Point& x) const {
  using std::numbers::pi;
  const double cx = std::cos(pi * x.x()), sx = std::sin(pi * x.x());
  const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
  const double c2y = std::cos(2 * pi * x.y()), s2y = std::sin(2 * pi * x.y());
  Mat2 g;
  g << -pi * sx * s2y, 2 * pi * cx * c2y,
        pi * cy * cx, -pi * sy * sx;
  return g;
}

std::array<Mat2, 2> TrigCase::displacement_hessian(const Point& x) const {
  using std::numbers::pi;
  const double pi2 = pi * pi;
  const double cx = std::cos(pi * x.x()), sx = std::sin(pi * x.x());
  const double cy = std::cos(pi * x.y()), sy = std::sin(pi * x.y());
  const double c2y = std::cos(2 * pi * x.y()), s2y = std::sin(2 * pi * x.y());
  Mat2 h0, h1;
  h0 << -pi2 * cx * s2y, -2 * pi2 * sx * c2y,
        -2 * pi2 * sx * c2y, -4 * pi2 * cx * s2y;
  h1 << -pi2 * cy * sx, -pi2 * sy * cx,
        -pi2 * sy * cx, -pi2 * cy * sx;
  return {h0, h1};
}

Vec2 LinearPatchCase::displacement(const Point& x) const {
  return {0.1 + 0.2 * x.x() + 0.3 * x.y(), -0.1 + 0.4 * x.x() - 0.25 * x.y()};
}

Mat2 LinearPatchCase::displacement_gradient(const Point&) const {
  Mat2 g;
  g << 0.2, 0.3, 0.4, -0.25;
  return g;
}

std::array<Mat2, 2> LinearPatchCase::displacement_hessian(const Point&) const {
  return {Mat2::Zero(), Mat2::Zero()};
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, CaseFactory, std::less<>> factories{
      {"trig-dirichlet", [] { return std::make_unique<TrigCase>(); }},
      {"linear-patch", [] { return std::make_unique<LinearPatchCase>(); }},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::unique_ptr<ManufacturedCase> make_case(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) throw std::invalid_argument("unknown case '" + std::string(name) + "'");
  return it->second();
}

void register_case(std::string name, CaseFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[std::move(name)] = std::move(factory);
}

std::vector<std::string> case_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, factory] : r.factories) names.push_back(name);
  return names;
}

}  // namespace msmfe
