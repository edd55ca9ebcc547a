#pragma once

#include <vector>

#include "vemkit/geometry.hpp"

namespace vemkit::quadrature {

/// One-dimensional rule on [-1, 1].
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;
};

/// Rule on a planar region (reference triangle or a polygon).
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return points.size(); }
  Eigen::VectorXd weight_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  }
};

/// Gauss-Legendre, exact to degree 2n-1.
SegmentRule gauss_segment(int n_points);

/// Gauss-Lobatto including both endpoints, exact to degree 2n-3.  Nodes are
/// returned in increasing order.
SegmentRule gauss_lobatto_segment(int n_points);

/// Collapsed tensor-product rule on the triangle (0,0), (1,0), (0,1), exact to
/// total degree `order`.
QuadratureRule triangle_rule(int order);

constexpr int kMaxTriangleOrder = 40;

/// Composite rule: ear-clip the polygon and map triangle_rule(order) onto
/// every sub-triangle.
QuadratureRule polygon_rule(const geometry::Polygon2D& polygon, int order);

/// Same, on a user-supplied sub-triangulation.
QuadratureRule polygon_rule(const geometry::Polygon2D& polygon, const geometry::Triangulation& tri,
                            int order);

/// Gauss rule mapped onto the segment [a, b]; weights carry the length factor.
QuadratureRule edge_rule(const Point& a, const Point& b, int n_points);

}  // namespace vemkit::quadrature
