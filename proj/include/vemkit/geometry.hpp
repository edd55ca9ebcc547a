#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "vemkit/polybasis.hpp"

namespace vemkit::geometry {

class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EdgeData {
  Point origin;
  Point end;
  double length = 0.0;
  Eigen::Vector2d tangent;  // unit, from origin to end
  Eigen::Vector2d normal;   // unit, outward
};

/// Counterclockwise polygon with cached measure, centroid, diameter and edge
/// frames.  Edge i runs from vertex i to vertex i+1 (mod N).
class Polygon2D {
public:
  explicit Polygon2D(std::vector<Point> vertices);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[i]; }
  double area() const { return area_; }
  const Point& centroid() const { return centroid_; }
  double diameter() const { return diameter_; }
  const std::vector<EdgeData>& edges() const { return edges_; }
  const EdgeData& edge(int i) const { return edges_[i]; }

private:
  std::vector<Point> vertices_;
  double area_ = 0.0;
  Point centroid_;
  double diameter_ = 0.0;
  std::vector<EdgeData> edges_;
};

/// Signed area by the shoelace formula (positive for CCW).
double signed_area(const std::vector<Point>& vertices);

/// Sub-triangles as index triples into the polygon's vertex list.
struct Triangulation {
  std::vector<std::array<int, 3>> triangles;
};

/// Ear clipping.  Strictly convex ears are clipped first; ears whose corner is
/// collinear (hanging nodes) only when nothing else is left.
Triangulation ear_clip(const Polygon2D& polygon);

double triangle_signed_area(const Point& a, const Point& b, const Point& c);

}  // namespace vemkit::geometry
