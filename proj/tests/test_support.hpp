#pragma once

#include <cmath>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "msmfe/analysis.hpp"
#include "msmfe/assembly.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/reference.hpp"
#include "msmfe/solver.hpp"
#include "msmfe/study.hpp"

namespace msmfe {

inline void PrintTo(Method method, std::ostream* os) { *os << to_string(method); }

}  // namespace msmfe

namespace msmfe::testing {

inline std::string data_path(const std::string& name) { return std::string(MSMFE_DATA_DIR) + "/" + name; }

/// Convex quadrilateral: a unit square with each corner jittered by up to `jitter`.
inline std::array<Point, 4> random_quad(std::mt19937& rng, double jitter = 0.2) {
  std::uniform_real_distribution<double> d(-jitter, jitter);
  std::array<Point, 4> r = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
  for (auto& p : r) p += Point(d(rng), d(rng));
  return r;
}

inline Mat2 random_tensor(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat2 t;
  t << d(rng), d(rng), d(rng), d(rng);
  return t;
}

/// Symmetric positive definite operator on 2x2 tensors.
inline TensorOperator random_spd_operator(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  TensorOperator m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = d(rng);
  }
  return m * m.transpose() + TensorOperator::Identity();
}

/// Uniform mesh with the right side (x = 1) tagged Neumann.
inline QuadMesh uniform_with_neumann(int n) {
  return generate_uniform(n).with_boundary_kinds([](const Point& mid) {
    return mid.x() > 1.0 - 1e-12 ? BoundaryKind::Neumann : BoundaryKind::Dirichlet;
  });
}

struct NamedMesh {
  std::string name;
  QuadMesh mesh;
};

/// Meshes used for structural checks: squares, smooth maps, a perturbed coarse mesh and
/// its refinement, and a mixed Dirichlet/Neumann square.
inline std::vector<NamedMesh> certificate_meshes() {
  std::vector<NamedMesh> out;
  out.push_back({"square-2", generate_uniform(2)});
  out.push_back({"square-4", generate_uniform(4)});
  out.push_back({"square-8", generate_uniform(8)});
  out.push_back({"smooth-4", generate_smooth(4)});
  out.push_back({"smooth-8", generate_smooth(8)});
  out.push_back({"h2par-0", h2par_coarse_mesh()});
  out.push_back({"h2par-1", refine_uniform(h2par_coarse_mesh())});
  out.push_back({"neumann-4", uniform_with_neumann(4)});
  return out;
}

inline double relative_difference(const Vector& a, const Vector& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

}  // namespace msmfe::testing
