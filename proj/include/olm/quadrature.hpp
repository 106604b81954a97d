#pragma once

#include <Eigen/Core>

#include <vector>

#include "olm/core.hpp"

namespace olm {

// Points in physical coordinates; weights carry the measure of the domain.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  double total_weight() const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += weights[i] * f(points[i]);
    return s;
  }
};

// Exact for bivariate polynomials up to `degree` on tri; degree in {1,2,3,4}.
// All weights are positive.
QuadratureRule triangle_rule(const Triangle& tri, int degree);

// Gauss points on [a,b]; exact along the segment up to `degree` in {1,...,5}.
QuadratureRule segment_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            int degree);

// Fan triangulation from vertex 0 with triangle_rule on each fan triangle.
// The empty polygon yields an empty rule.
QuadratureRule polygon_rule(const ConvexPolygon& poly, int degree);

}  // namespace olm
