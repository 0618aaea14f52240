#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace msmfe {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Linear operator on 2x2 tensors acting on (t11, t12, t21, t22).
using TensorOperator = Eigen::Matrix4d;

inline Eigen::Vector4d flatten(const Mat2& t) { return {t(0, 0), t(0, 1), t(1, 0), t(1, 1)}; }

inline Mat2 unflatten(const Eigen::Vector4d& v) {
  Mat2 t;
  t << v(0), v(1), v(2), v(3);
  return t;
}

/// Double contraction a : b.
inline double contract(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

/// Skew matrix [[0, p], [-p, 0]] carrying the rotation scalar p.
inline Mat2 skew_from_scalar(double p) {
  Mat2 s;
  s << 0.0, p, -p, 0.0;
  return s;
}

enum class Method { Msmfe0, Msmfe1 };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element map with nonpositive Jacobian, or an otherwise unusable cell.
struct DegenerateGeometry : Error {
  using Error::Error;
};

/// A matrix that must be symmetric positive definite failed its Cholesky factorization.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

}  // namespace msmfe
