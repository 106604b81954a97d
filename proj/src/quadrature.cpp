#include "olm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace olm {

namespace {

struct BaryPoint {
  double b0, b1, b2, w;  // weights sum to 1 over the whole rule
};

// degree 2: interior 3-point rule
constexpr BaryPoint k_tri_deg2[] = {
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
};

// degree 4, 6-point rule with positive weights (used for degrees 3 and 4)
constexpr double k_a1 = 0.108103018168070;
constexpr double k_b1 = 0.445948490915965;
constexpr double k_w1 = 0.223381589678011;
constexpr double k_a2 = 0.816847572980459;
constexpr double k_b2 = 0.091576213509771;
constexpr double k_w2 = 0.109951743655322;
constexpr BaryPoint k_tri_deg4[] = {
    {k_a1, k_b1, k_b1, k_w1}, {k_b1, k_a1, k_b1, k_w1}, {k_b1, k_b1, k_a1, k_w1},
    {k_a2, k_b2, k_b2, k_w2}, {k_b2, k_a2, k_b2, k_w2}, {k_b2, k_b2, k_a2, k_w2},
};

}  // namespace

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

QuadratureRule triangle_rule(const Triangle& tri, int degree) {
  const double area = triangle_signed_area(tri);
  if (!(area > 0.0)) throw std::invalid_argument("triangle_rule: non-positive area");

  const BaryPoint* data = nullptr;
  int n = 0;
  switch (degree) {
    case 1: {
      static constexpr BaryPoint centroid[] = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0}};
      data = centroid;
      n = 1;
      break;
    }
    case 2:
      data = k_tri_deg2;
      n = 3;
      break;
    case 3:
    case 4:
      data = k_tri_deg4;
      n = 6;
      break;
    default:
      throw std::invalid_argument("triangle_rule: unsupported degree");
  }

  QuadratureRule rule;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(data[i].b0 * tri[0] + data[i].b1 * tri[1] + data[i].b2 * tri[2]);
    rule.weights.push_back(data[i].w * area);
  }
  return rule;
}

QuadratureRule segment_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            int degree) {
  const double len = (b - a).norm();
  if (!(len > 0.0)) throw std::invalid_argument("segment_rule: degenerate segment");
  if (degree < 1 || degree > 5)
    throw std::invalid_argument("segment_rule: unsupported degree");

  // Gauss-Legendre on [0,1]
  std::vector<std::pair<double, double>> tw;
  if (degree <= 1) {
    tw = {{0.5, 1.0}};
  } else if (degree <= 3) {
    const double d = 0.5 / std::sqrt(3.0);
    tw = {{0.5 - d, 0.5}, {0.5 + d, 0.5}};
  } else {
    const double d = 0.5 * std::sqrt(0.6);
    tw = {{0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}};
  }

  QuadratureRule rule;
  for (const auto& [t, w] : tw) {
    rule.points.push_back(a + t * (b - a));
    rule.weights.push_back(w * len);
  }
  return rule;
}

QuadratureRule polygon_rule(const ConvexPolygon& poly, int degree) {
  QuadratureRule rule;
  if (poly.empty()) return rule;
  for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i) {
    const Triangle fan{poly.vertices[0], poly.vertices[i], poly.vertices[i + 1]};
    if (!(triangle_signed_area(fan) > 0.0)) continue;
    QuadratureRule part = triangle_rule(fan, degree);
    rule.points.insert(rule.points.end(), part.points.begin(), part.points.end());
    rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
  }
  return rule;
}

}  // namespace olm
