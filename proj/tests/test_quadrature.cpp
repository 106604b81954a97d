#include <doctest.h>

#include <cmath>

#include "olm/quadrature.hpp"
#include "oracles.hpp"

using Eigen::Vector2d;

namespace {

const olm::Triangle k_ref{Vector2d(0, 0), Vector2d(1, 0), Vector2d(0, 1)};
const olm::Triangle k_skew{Vector2d(0.2, -0.1), Vector2d(1.3, 0.4), Vector2d(0.5, 1.1)};

}  // namespace

TEST_CASE("triangle rule: degree 1 is the centroid rule") {
  const olm::QuadratureRule rule = olm::triangle_rule(k_ref, 1);
  REQUIRE(rule.size() == 1);
  CHECK((rule.points[0] - Vector2d(1.0 / 3, 1.0 / 3)).norm() == doctest::Approx(0.0));
  CHECK(rule.weights[0] == doctest::Approx(0.5));
}

TEST_CASE("triangle rule: exactness sweep on reference and skewed triangles") {
  for (int degree = 1; degree <= 4; ++degree) {
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        auto mono = [a, b](const Vector2d& p) {
          return std::pow(p.x(), a) * std::pow(p.y(), b);
        };
        const double got_ref = olm::triangle_rule(k_ref, degree).integrate(mono);
        const double want_ref = oracle::ref_triangle_monomial(a, b);
        CHECK(got_ref == doctest::Approx(want_ref).epsilon(1e-12));

        const double got_skew = olm::triangle_rule(k_skew, degree).integrate(mono);
        const olm::ConvexPolygon tri_poly{{k_skew[0], k_skew[1], k_skew[2]}};
        const double want_skew = oracle::polygon_moment(tri_poly, a, b);
        CHECK(got_skew == doctest::Approx(want_skew).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("triangle rule: x^2 y over reference triangle via degree 3") {
  const double got = olm::triangle_rule(k_ref, 3).integrate([](const Vector2d& p) {
    return p.x() * p.x() * p.y();
  });
  CHECK(got == doctest::Approx(1.0 / 60.0).epsilon(1e-13));
}

TEST_CASE("triangle rule: weights positive, sum to area") {
  for (int degree = 1; degree <= 4; ++degree) {
    const olm::QuadratureRule rule = olm::triangle_rule(k_skew, degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    CHECK(rule.total_weight() ==
          doctest::Approx(olm::triangle_signed_area(k_skew)).epsilon(1e-13));
  }
  CHECK_THROWS(olm::triangle_rule(k_ref, 5));
  CHECK_THROWS(olm::triangle_rule(k_ref, 0));
}

TEST_CASE("segment rule: midpoint, exactness, weights") {
  const Vector2d a(0, 0), b(1, 0);
  const olm::QuadratureRule mid = olm::segment_rule(a, b, 1);
  REQUIRE(mid.size() == 1);
  CHECK((mid.points[0] - Vector2d(0.5, 0)).norm() == doctest::Approx(0.0));
  CHECK(mid.weights[0] == doctest::Approx(1.0));

  const double cubic = olm::segment_rule(a, b, 3).integrate([](const Vector2d& p) {
    return p.x() * p.x() * p.x();
  });
  CHECK(cubic == doctest::Approx(0.25).epsilon(1e-15));

  // exactness along a general segment: t^k against the analytic value
  const Vector2d c(0.3, -0.2), d(1.1, 0.9);
  const double len = (d - c).norm();
  for (int degree = 1; degree <= 5; ++degree) {
    for (int k = 0; k <= degree; ++k) {
      const double got = olm::segment_rule(c, d, degree).integrate([&](const Vector2d& p) {
        const double t = (p - c).norm() / len;
        return std::pow(t, k);
      });
      CHECK(got == doctest::Approx(len / (k + 1)).epsilon(1e-12));
    }
    const olm::QuadratureRule rule = olm::segment_rule(c, d, degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    CHECK(rule.total_weight() == doctest::Approx(len).epsilon(1e-13));
  }

  CHECK_THROWS(olm::segment_rule(a, a, 2));
  CHECK_THROWS(olm::segment_rule(a, b, 6));
}

TEST_CASE("polygon rule: squares, moments, empty polygon") {
  const olm::ConvexPolygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK(olm::polygon_rule(square, 2).integrate([](const Vector2d&) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(olm::polygon_rule(square, 2).integrate([](const Vector2d& p) { return p.x(); }) ==
        doctest::Approx(0.5).epsilon(1e-14));

  const olm::ConvexPolygon quad{{{0.1, 0.0}, {1.2, 0.3}, {0.9, 1.4}, {-0.2, 0.8}}};
  const double got = olm::polygon_rule(quad, 3).integrate([](const Vector2d& p) {
    return p.x() * p.x() + p.x() * p.y();
  });
  const double want =
      oracle::polygon_moment(quad, 2, 0) + oracle::polygon_moment(quad, 1, 1);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));

  CHECK(olm::polygon_rule(olm::ConvexPolygon{}, 2).size() == 0);

  // a polygon that is a triangle reproduces the triangle rule's total weight
  const olm::ConvexPolygon tri{{k_skew[0], k_skew[1], k_skew[2]}};
  CHECK(olm::polygon_rule(tri, 2).total_weight() ==
        doctest::Approx(olm::triangle_rule(k_skew, 2).total_weight()).epsilon(1e-14));

  // exactness sweep on the quadrilateral
  for (int degree = 1; degree <= 4; ++degree)
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        const double q = olm::polygon_rule(quad, degree).integrate([&](const Vector2d& p) {
          return std::pow(p.x(), a) * std::pow(p.y(), b);
        });
        CHECK(q == doctest::Approx(oracle::polygon_moment(quad, a, b)).epsilon(1e-12));
      }
}
