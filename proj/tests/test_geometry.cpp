#include <gtest/gtest.h>

#include "support.hpp"
#include "vemkit/geometry.hpp"

using namespace vemkit;
using namespace vemkit::geometry;
using testing_support::l_hexagon;
using testing_support::unit_square;

TEST(Polygon, UnitSquareMeasures) {
  const auto p = unit_square();
  EXPECT_DOUBLE_EQ(p.area(), 1.0);
  EXPECT_NEAR(p.centroid().x(), 0.5, 1e-15);
  EXPECT_NEAR(p.centroid().y(), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(p.diameter(), std::sqrt(2.0));
}

TEST(Polygon, BottomEdgeNormalPointsDown) {
  const auto& e = unit_square().edge(0);
  EXPECT_NEAR(e.normal.x(), 0.0, 1e-15);
  EXPECT_NEAR(e.normal.y(), -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(e.length, 1.0);
}

TEST(Polygon, LHexagonArea) { EXPECT_DOUBLE_EQ(l_hexagon().area(), 3.0); }

TEST(Polygon, RejectsClockwiseRepeatedAndCollinear) {
  EXPECT_THROW(Polygon2D({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), GeometryError);
  EXPECT_THROW(Polygon2D({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), GeometryError);
  EXPECT_THROW(Polygon2D({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
  EXPECT_THROW(Polygon2D({{0, 0}, {1, 0}}), GeometryError);
}

TEST(Polygon, RandomCorpusInvariants) {
  for (const auto& p : testing_support::random_polygons(100)) {
    double perimeter = 0.0;
    Eigen::Vector2d normal_sum = Eigen::Vector2d::Zero();
    double diameter = 0.0;
    for (const auto& e : p.edges()) {
      EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
      perimeter += e.length;
      normal_sum += e.length * e.normal;
    }
    for (const auto& a : p.vertices())
      for (const auto& b : p.vertices()) diameter = std::max(diameter, (a - b).norm());
    EXPECT_LE(normal_sum.norm(), 1e-12 * perimeter);
    EXPECT_DOUBLE_EQ(p.diameter(), diameter);
    const auto lo = [&](int axis) {
      double m = 1e300;
      for (const auto& v : p.vertices()) m = std::min(m, v(axis));
      return m;
    };
    const auto hi = [&](int axis) {
      double m = -1e300;
      for (const auto& v : p.vertices()) m = std::max(m, v(axis));
      return m;
    };
    for (int axis = 0; axis < 2; ++axis) {
      EXPECT_GE(p.centroid()(axis), lo(axis));
      EXPECT_LE(p.centroid()(axis), hi(axis));
    }
  }
}

namespace {

double triangulated_area(const Polygon2D& p, const Triangulation& t) {
  double sum = 0.0;
  for (const auto& tri : t.triangles) {
    const double a = triangle_signed_area(p.vertex(tri[0]), p.vertex(tri[1]), p.vertex(tri[2]));
    EXPECT_GT(a, 0.0);
    sum += a;
  }
  return sum;
}

}  // namespace

TEST(EarClip, TriangleIsItself) {
  const Polygon2D p({{0, 0}, {1, 0}, {0, 1}});
  const auto t = ear_clip(p);
  ASSERT_EQ(t.triangles.size(), 1u);
  EXPECT_DOUBLE_EQ(triangulated_area(p, t), 0.5);
}

TEST(EarClip, ConvexPentagon) {
  const Polygon2D p({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
  const auto t = ear_clip(p);
  EXPECT_EQ(t.triangles.size(), 3u);
  EXPECT_NEAR(triangulated_area(p, t), p.area(), 1e-14);
}

TEST(EarClip, NonConvexLHexagon) {
  const auto p = l_hexagon();
  const auto t = ear_clip(p);
  EXPECT_EQ(t.triangles.size(), 4u);
  EXPECT_NEAR(triangulated_area(p, t), 3.0, 1e-14);
}

TEST(EarClip, HangingNodeGivesNoFlatTriangle) {
  const auto p = testing_support::hanging_pentagon();
  const auto t = ear_clip(p);
  EXPECT_EQ(t.triangles.size(), 3u);
  for (const auto& tri : t.triangles)
    EXPECT_GT(triangle_signed_area(p.vertex(tri[0]), p.vertex(tri[1]), p.vertex(tri[2])), 1e-3);
}

TEST(EarClip, RandomCorpusAreaSums) {
  for (const auto& p : testing_support::random_polygons(100)) {
    const auto t = ear_clip(p);
    EXPECT_EQ(static_cast<int>(t.triangles.size()), p.num_vertices() - 2);
    EXPECT_NEAR(triangulated_area(p, t), p.area(), 1e-12 * p.area());
  }
}
