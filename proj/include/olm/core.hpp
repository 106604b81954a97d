#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace olm {

using Triangle = std::array<Eigen::Vector2d, 3>;

// z-component of the cross product of two 2D vectors
inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// counter-clockwise rotation by 90 degrees
inline Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

inline double triangle_signed_area(const Triangle& t) {
  return 0.5 * cross2(t[1] - t[0], t[2] - t[0]);
}

inline double triangle_diameter(const Triangle& t) {
  return std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
}

// Convex polygon with counter-clockwise vertex loop. Fewer than 3 vertices
// represents the empty polygon.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;

  bool empty() const { return vertices.size() < 3; }

  double area() const {
    if (empty()) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Eigen::Vector2d& p = vertices[i];
      const Eigen::Vector2d& q = vertices[(i + 1) % vertices.size()];
      a += cross2(p, q);
    }
    return 0.5 * a;
  }
};

}  // namespace olm
