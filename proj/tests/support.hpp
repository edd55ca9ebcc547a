#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "vemkit/geometry.hpp"
#include "vemkit/polybasis.hpp"
#include "vemkit/quadrature.hpp"

namespace testing_support {

using vemkit::Point;

/// Star-shaped polygon around (cx, cy): jittered angles, radii in [0.55, 1].
/// Every third one is convex (equal radii).
inline vemkit::geometry::Polygon2D random_polygon(std::mt19937& rng, int index) {
  std::uniform_int_distribution<int> count(3, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  const double scale = 0.05 + 2.0 * unit(rng);
  const Point center(unit(rng) * 4 - 2, unit(rng) * 4 - 2);
  const bool convex = index % 3 == 0;
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * (i + 0.35 * (unit(rng) - 0.5)) / n;
    const double r = convex ? 1.0 : 0.55 + 0.45 * unit(rng);
    v.push_back(center + scale * r * Point(std::cos(t), std::sin(t)));
  }
  return vemkit::geometry::Polygon2D(v);
}

inline std::vector<vemkit::geometry::Polygon2D> random_polygons(int count, unsigned seed = 12345) {
  std::mt19937 rng(seed);
  std::vector<vemkit::geometry::Polygon2D> out;
  for (int i = 0; i < count; ++i) out.push_back(random_polygon(rng, i));
  return out;
}

/// Exact integral of x^a y^b by the divergence theorem: boundary Gauss rule
/// of x^{a+1} y^b n_x / (a+1).
inline double exact_monomial_integral(const vemkit::geometry::Polygon2D& polygon, int a, int b) {
  double sum = 0.0;
  for (const auto& e : polygon.edges()) {
    const auto rule = vemkit::quadrature::edge_rule(e.origin, e.end, (a + b + 3) / 2 + 1);
    for (std::size_t q = 0; q < rule.size(); ++q)
      sum += rule.weights[q] * std::pow(rule.points[q].x(), a + 1) * std::pow(rule.points[q].y(), b) * e.normal.x();
  }
  return sum / (a + 1);
}

inline vemkit::geometry::Polygon2D unit_square() { return vemkit::geometry::Polygon2D({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline vemkit::geometry::Polygon2D l_hexagon() {
  return vemkit::geometry::Polygon2D({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}

/// Square with a hanging node on its right edge.
inline vemkit::geometry::Polygon2D hanging_pentagon() {
  return vemkit::geometry::Polygon2D({{0, 0}, {1, 0}, {1, 0.5}, {1, 1}, {0, 1}});
}

}  // namespace testing_support

namespace testing_support {

/// Coefficients of f in `basis` by L2 projection on a polygon rule.
template <class F>
Eigen::VectorXd fit(const vemkit::polybasis::MonomialBasis& basis, const vemkit::geometry::Polygon2D& polygon, F f) {
  const auto rule = vemkit::quadrature::polygon_rule(polygon, 2 * basis.order() + 2);
  const Eigen::MatrixXd v = basis.values(rule.points);
  const Eigen::VectorXd w = rule.weight_vector();
  Eigen::VectorXd values(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) values(static_cast<Eigen::Index>(q)) = f(rule.points[q]);
  const Eigen::MatrixXd H = v.transpose() * w.asDiagonal() * v;
  return H.ldlt().solve(v.transpose() * w.asDiagonal() * values);
}

/// Deterministic coefficient vector of length n.
inline Eigen::VectorXd sample_coefficients(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = u(rng);
  return c;
}

inline int numerical_rank(const Eigen::MatrixXd& m, double rel = 1e-10) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

}  // namespace testing_support
