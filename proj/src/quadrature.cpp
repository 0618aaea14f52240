#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msmfe/reference.hpp"

namespace msmfe {

void gauss_rule_1d(int order, std::vector<double>& points, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
  points.assign(order, 0.0);
  weights.assign(order, 0.0);
  // Newton iteration on P_n from the Chebyshev-like initial guess, then map [-1,1] -> [0,1].
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    points[i] = 0.5 * (1.0 - x);
    points[order - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = weights[order - 1 - i] = 0.5 * w;
  }
}

QuadratureRule gauss_rule(int order) {
  std::vector<double> x, w;
  gauss_rule_1d(order, x, w);
  QuadratureRule rule;
  rule.points.reserve(order * order);
  rule.weights.reserve(order * order);
  for (int j = 0; j < order; ++j) {
    for (int i = 0; i < order; ++i) {
      rule.points.emplace_back(x[i], x[j]);
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

QuadratureRule trapezoid_rule() {
  QuadratureRule rule;
  for (const Point& p : reference_corners()) {
    rule.points.push_back(p);
    rule.weights.push_back(0.25);
  }
  return rule;
}

QuadratureRule iterated_trapezoid_rule(int intervals) {
  if (intervals < 1) throw std::invalid_argument("iterated_trapezoid_rule: intervals must be positive");
  std::vector<double> x(intervals + 1), w(intervals + 1, 1.0 / intervals);
  for (int i = 0; i <= intervals; ++i) x[i] = static_cast<double>(i) / intervals;
  w.front() = w.back() = 0.5 / intervals;
  QuadratureRule rule;
  for (int j = 0; j <= intervals; ++j) {
    for (int i = 0; i <= intervals; ++i) {
      rule.points.emplace_back(x[i], x[j]);
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

}  // namespace msmfe
