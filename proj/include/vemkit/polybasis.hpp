#pragma once

// Scaled-monomial polynomial machinery on a single element.
//
// A scaled monomial of multi-index a is m_a(x) = ((x - x_E) / h_E)^a.  In two
// dimensions the monomials are enumerated shell by shell in total degree and,
// inside a shell of degree n, from (n,0) down to (0,n):
//
//   (0,0) -> 1, (1,0) -> 2, (0,1) -> 3, (2,0) -> 4, (1,1) -> 5, (0,2) -> 6, ...
//
// Vector polynomials in [P_k]^2 use the component-blocked basis: indices
// 0..n_k-1 are (m_a, 0), indices n_k..2n_k-1 are (0, m_a).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vemkit {

using Point = Eigen::Vector2d;

namespace polybasis {

using MultiIndex = std::array<int, 2>;

/// Dimension of P_k in d variables; 0 for k = -1.
int poly_dim(int d, int k);

/// 1-based position of a multi-index in the enumeration above (d = 1 or 2).
int monomial_index(int d, std::span<const int> multi_index);

/// Inverse of monomial_index.
std::vector<int> monomial_exponents(int d, int index);

/// n^nabla_k = n_{k+1} - 1 and n^perp_k = 2 n_k - n^nabla_k (two dimensions).
int grad_dim(int k);
int perp_dim(int k);

class MonomialBasis {
public:
  MonomialBasis(int order, Point centroid, double diameter);

  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Point& centroid() const { return centroid_; }
  double diameter() const { return diameter_; }
  const std::vector<MultiIndex>& exponents() const { return exponents_; }

  /// Same centroid and diameter, different order.
  MonomialBasis with_order(int order) const { return {order, centroid_, diameter_}; }

  /// Rows are points, columns monomials.
  Eigen::MatrixXd values(std::span<const Point> points) const;
  /// [d/dx, d/dy] Vandermonde matrices.
  std::array<Eigen::MatrixXd, 2> gradients(std::span<const Point> points) const;
  Eigen::MatrixXd laplacians(std::span<const Point> points) const;

  Eigen::RowVectorXd values_at(const Point& x) const;

  /// Coefficient matrix (size x size) of the partial derivative along `axis`
  /// expressed in this same basis: column a holds d m_a / dx_axis.
  Eigen::MatrixXd derivative_matrix(int axis) const;

private:
  int order_;
  Point centroid_;
  double diameter_;
  std::vector<MultiIndex> exponents_;
};

/// G^nabla_k / G^perp_k coefficient matrices in the vector basis of [P_k]^2.
struct GradDecomposition {
  int order = 0;
  Eigen::MatrixXd t_nabla;  // n^nabla_k x 2 n_k
  Eigen::MatrixXd t_perp;   // n^perp_k  x 2 n_k
};

/// Row a of t_nabla is grad m^{k+1}_{a+1}; t_perp is read off the trailing
/// right singular vectors of t_nabla.  Throws std::runtime_error when the
/// numerical rank disagrees with n^nabla_k.
GradDecomposition build_grad_decomposition(const MonomialBasis& basis);

/// Embeds coefficients of a [P_low]^2 field into the [P_high]^2 vector basis.
/// Result is (2 n_low) x (2 n_high) with a single 1 per row.
Eigen::MatrixXd vector_embedding(int low, int high);

}  // namespace polybasis
}  // namespace vemkit
