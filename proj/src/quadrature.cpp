#include "vemkit/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace vemkit::quadrature {

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

SegmentRule gauss_segment(int n_points) {
  if (n_points <= 0) throw std::invalid_argument("gauss_segment: n must be positive");
  // Golub-Welsch
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_points, n_points);
  for (int j = 1; j < n_points; ++j) {
    const double b = j / std::sqrt(4.0 * j * j - 1.0);
    jacobi(j, j - 1) = b;
    jacobi(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  SegmentRule rule;
  rule.exactness = 2 * n_points - 1;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    // polish the node with Newton on P_n for full accuracy
    double x = eig.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const auto [pn, pnm1] = legendre(n_points, x);
      const double dp = n_points * (x * pn - pnm1) / (x * x - 1.0);
      x -= pn / dp;
    }
    const auto [pn, pnm1] = legendre(n_points, x);
    const double dp = n_points * (x * pn - pnm1) / (x * x - 1.0);
    rule.points[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n_points % 2 == 1) rule.points[n_points / 2] = 0.0;
  return rule;
}

SegmentRule gauss_lobatto_segment(int n_points) {
  if (n_points <= 1) throw std::invalid_argument("gauss_lobatto_segment: n must be at least 2");
  const int n = n_points - 1;  // interior nodes are the roots of P'_n
  SegmentRule rule;
  rule.exactness = 2 * n_points - 3;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  rule.points.front() = -1.0;
  rule.points.back() = 1.0;
  for (int i = 1; i < n; ++i) {
    // Chebyshev-Gauss-Lobatto initial guess, Newton on (1-x^2) P'_n
    double x = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pnm1] = legendre(n, x);
      const double dp = n * (pnm1 - x * pn) / (1.0 - x * x);
      // d/dx [(1-x^2) P'_n] = -n(n+1) P_n
      const double f = (1.0 - x * x) * dp;
      const double df = -n * (n + 1.0) * pn;
      const double step = f / df;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.points[i] = x;
  }
  if (n_points % 2 == 1) rule.points[n_points / 2] = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double pn = legendre(n, rule.points[i]).first;
    rule.weights[i] = 2.0 / (n * (n + 1.0) * pn * pn);
  }
  return rule;
}

QuadratureRule triangle_rule(int order) {
  if (order < 0 || order > kMaxTriangleOrder)
    throw std::invalid_argument("triangle_rule: unsupported order " + std::to_string(order));
  // Duffy map x = u, y = v (1 - u): the Jacobian (1 - u) adds one degree in u
  const int n = (order + 3) / 2;
  const SegmentRule g = gauss_segment(n);
  QuadratureRule rule;
  rule.exactness = order;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.points[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.points[j] + 1.0);
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule polygon_rule(const geometry::Polygon2D& polygon, const geometry::Triangulation& tri,
                            int order) {
  const QuadratureRule ref = triangle_rule(order);
  QuadratureRule rule;
  rule.exactness = order;
  rule.points.reserve(ref.size() * tri.triangles.size());
  rule.weights.reserve(ref.size() * tri.triangles.size());
  for (const auto& t : tri.triangles) {
    const Point& a = polygon.vertex(t[0]);
    const Point& b = polygon.vertex(t[1]);
    const Point& c = polygon.vertex(t[2]);
    const double jac = 2.0 * geometry::triangle_signed_area(a, b, c);
    if (jac <= 0.0) continue;
    for (std::size_t q = 0; q < ref.size(); ++q) {
      const Point& r = ref.points[q];
      rule.points.push_back(a + r.x() * (b - a) + r.y() * (c - a));
      rule.weights.push_back(ref.weights[q] * jac);
    }
  }
  return rule;
}

QuadratureRule polygon_rule(const geometry::Polygon2D& polygon, int order) {
  return polygon_rule(polygon, geometry::ear_clip(polygon), order);
}

QuadratureRule edge_rule(const Point& a, const Point& b, int n_points) {
  const SegmentRule g = gauss_segment(n_points);
  const double half = 0.5 * (b - a).norm();
  QuadratureRule rule;
  rule.exactness = g.exactness;
  for (int i = 0; i < n_points; ++i) {
    const double s = 0.5 * (g.points[i] + 1.0);
    rule.points.push_back(a + s * (b - a));
    rule.weights.push_back(g.weights[i] * half);
  }
  return rule;
}

}  // namespace vemkit::quadrature
