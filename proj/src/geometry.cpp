#include "vemkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <list>

namespace vemkit::geometry {

double triangle_signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double signed_area(const std::vector<Point>& vertices) {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

Polygon2D::Polygon2D(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const int n = num_vertices();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");

  double diameter = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diameter = std::max(diameter, (vertices_[i] - vertices_[j]).norm());
  diameter_ = diameter;
  if (!(diameter_ > 0.0)) throw GeometryError("degenerate polygon: zero diameter");

  for (int i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    if ((b - a).norm() <= 1e-14 * diameter_)
      throw GeometryError("polygon has repeated consecutive vertices at index " + std::to_string(i));
  }

  // area and centroid relative to the first vertex to limit cancellation
  const Point origin = vertices_[0];
  double twice_area = 0.0;
  Eigen::Vector2d moment = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = vertices_[i] - origin;
    const Eigen::Vector2d q = vertices_[(i + 1) % n] - origin;
    const double cross = p.x() * q.y() - q.x() * p.y();
    twice_area += cross;
    moment += cross * (p + q);
  }
  area_ = 0.5 * twice_area;
  if (!(area_ > 1e-14 * diameter_ * diameter_))
    throw GeometryError("polygon is not counterclockwise or has zero area");
  centroid_ = origin + moment / (3.0 * twice_area);

  edges_.resize(n);
  for (int i = 0; i < n; ++i) {
    EdgeData& e = edges_[i];
    e.origin = vertices_[i];
    e.end = vertices_[(i + 1) % n];
    const Eigen::Vector2d d = e.end - e.origin;
    e.length = d.norm();
    e.tangent = d / e.length;
    e.normal = Eigen::Vector2d(e.tangent.y(), -e.tangent.x());
  }
}

namespace {

bool point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c, double tol) {
  return triangle_signed_area(a, b, p) >= -tol && triangle_signed_area(b, c, p) >= -tol &&
         triangle_signed_area(c, a, p) >= -tol;
}

}  // namespace

Triangulation ear_clip(const Polygon2D& polygon) {
  const auto& v = polygon.vertices();
  const int n = polygon.num_vertices();
  const double h = polygon.diameter();
  const double tol = 1e-12 * h * h;

  Triangulation out;
  out.triangles.reserve(n - 2);
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;

  auto is_ear = [&](std::size_t pos, bool allow_flat) {
    const std::size_t m = ring.size();
    const int ia = ring[(pos + m - 1) % m];
    const int ib = ring[pos];
    const int ic = ring[(pos + 1) % m];
    const double area = triangle_signed_area(v[ia], v[ib], v[ic]);
    if (allow_flat ? area < -tol : area <= tol) return false;
    for (std::size_t j = 0; j < m; ++j) {
      const int id = ring[j];
      if (id == ia || id == ib || id == ic) continue;
      // points on the closing diagonal would split into a zero-area piece
      if (area > tol && point_in_triangle(v[id], v[ia], v[ib], v[ic], tol)) return false;
    }
    return true;
  };

  while (ring.size() > 3) {
    bool clipped = false;
    for (int pass = 0; pass < 2 && !clipped; ++pass) {
      for (std::size_t pos = 0; pos < ring.size(); ++pos) {
        if (!is_ear(pos, pass == 1)) continue;
        const std::size_t m = ring.size();
        out.triangles.push_back({ring[(pos + m - 1) % m], ring[pos], ring[(pos + 1) % m]});
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(pos));
        clipped = true;
        break;
      }
    }
    if (!clipped) throw GeometryError("ear_clip: no ear found (self-intersecting polygon?)");
  }
  if (triangle_signed_area(v[ring[0]], v[ring[1]], v[ring[2]]) <= tol)
    throw GeometryError("ear_clip: degenerate polygon (collinear remainder)");
  out.triangles.push_back({ring[0], ring[1], ring[2]});
  return out;
}

}  // namespace vemkit::geometry
