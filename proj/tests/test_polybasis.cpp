#include <gtest/gtest.h>

#include <random>

#include "vemkit/polybasis.hpp"

using namespace vemkit;
using namespace vemkit::polybasis;

TEST(MonomialIndex, TwoDimensionalEnumeration) {
  const std::vector<std::pair<std::array<int, 2>, int>> cases{{{0, 0}, 1}, {{1, 0}, 2}, {{0, 1}, 3}, {{2, 0}, 4}, {{0, 2}, 6}};
  for (const auto& [alpha, index] : cases) EXPECT_EQ(monomial_index(2, alpha), index);
}

TEST(MonomialIndex, OneDimensionalIsDegreeOrder) {
  const std::array<int, 1> alpha{3};
  EXPECT_EQ(monomial_index(1, alpha), 4);
}

TEST(MonomialIndex, InverseRoundTripUpToDegreeTen) {
  for (int d = 1; d <= 2; ++d)
    for (int i = 1; i <= poly_dim(d, 10); ++i) {
      const auto alpha = monomial_exponents(d, i);
      EXPECT_EQ(monomial_index(d, alpha), i);
    }
}

TEST(PolyDim, Values) {
  EXPECT_EQ(poly_dim(2, 3), 10);
  EXPECT_EQ(poly_dim(2, -1), 0);
  EXPECT_EQ(poly_dim(1, 2), 3);
}

TEST(Vandermonde, ConstantColumnAndCentroidRow) {
  const MonomialBasis basis(3, Point(0.3, -0.2), 0.7);
  const std::vector<Point> pts{{0.3, -0.2}, {1.0, 2.0}, {-0.5, 0.1}};
  const Eigen::MatrixXd v = basis.values(pts);
  EXPECT_TRUE(v.col(0).isOnes());
  EXPECT_DOUBLE_EQ(v(0, 0), 1.0);
  EXPECT_EQ(v.row(0).tail(v.cols() - 1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Vandermonde, LinearMonomialGradient) {
  const double h = 0.7;
  const MonomialBasis basis(1, Point(0.3, -0.2), h);
  const std::vector<Point> pts{{0.1, 0.1}, {2.0, -1.0}};
  const auto g = basis.gradients(pts);
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(g[0](i, 1), 1.0 / h);
    EXPECT_DOUBLE_EQ(g[1](i, 1), 0.0);
  }
}

TEST(Vandermonde, RejectsEmptyPointList) {
  const MonomialBasis basis(2, Point::Zero(), 1.0);
  EXPECT_THROW(basis.values(std::vector<Point>{}), std::invalid_argument);
}

TEST(Vandermonde, LaplacianMatchesDerivativeMatrices) {
  const MonomialBasis basis(4, Point(0.2, 0.1), 1.3);
  const std::vector<Point> pts{{0.4, 0.9}, {-0.3, 0.2}};
  const Eigen::MatrixXd dx = basis.derivative_matrix(0), dy = basis.derivative_matrix(1);
  EXPECT_LE((basis.laplacians(pts) - basis.values(pts) * (dx * dx + dy * dy)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GradDecomposition, ShapesForOrdersZeroAndTwo) {
  const auto d0 = build_grad_decomposition(MonomialBasis(0, Point::Zero(), 1.0));
  EXPECT_EQ(d0.t_nabla.rows(), 2);
  EXPECT_EQ(d0.t_nabla.cols(), 2);
  EXPECT_EQ(d0.t_perp.rows(), 0);
  const auto d2 = build_grad_decomposition(MonomialBasis(2, Point::Zero(), 1.0));
  EXPECT_EQ(d2.t_nabla.rows(), 9);
  EXPECT_EQ(d2.t_nabla.cols(), 12);
  EXPECT_EQ(d2.t_perp.rows(), 3);
  EXPECT_EQ(d2.t_perp.cols(), 12);
}

TEST(GradDecomposition, OrthogonalityUpToOrderFour) {
  for (int k = 0; k <= 4; ++k) {
    const auto d = build_grad_decomposition(MonomialBasis(k, Point(0.4, 0.1), 0.9));
    EXPECT_EQ(d.t_perp.rows(), perp_dim(k));
    if (d.t_perp.rows() == 0) continue;
    EXPECT_LE((d.t_nabla * d.t_perp.transpose()).cwiseAbs().maxCoeff(), 1e-12) << k;
    const auto n = d.t_perp.rows();
    EXPECT_LE((d.t_perp * d.t_perp.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12) << k;
  }
}

TEST(GradDecomposition, RowsAreGradientsOfHigherMonomials) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.emplace_back(u(rng), u(rng));
  for (int k = 0; k <= 4; ++k) {
    const MonomialBasis basis(k, Point(0.1, -0.3), 1.7);
    const auto d = build_grad_decomposition(basis);
    const Eigen::MatrixXd v = basis.values(pts);
    const auto g = basis.with_order(k + 1).gradients(pts);
    const int n = basis.size();
    for (int a = 0; a < d.t_nabla.rows(); ++a) {
      const Eigen::VectorXd gx = v * d.t_nabla.row(a).head(n).transpose();
      const Eigen::VectorXd gy = v * d.t_nabla.row(a).tail(n).transpose();
      EXPECT_LE((gx - g[0].col(a + 1)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((gy - g[1].col(a + 1)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(VectorEmbedding, SelectsLowerOrderCoefficients) {
  const Eigen::MatrixXd e = vector_embedding(1, 2);
  ASSERT_EQ(e.rows(), 6);
  ASSERT_EQ(e.cols(), 12);
  EXPECT_EQ(e(0, 0), 1.0);
  EXPECT_EQ(e(3, 6), 1.0);
  EXPECT_EQ(e.sum(), 6.0);
}
