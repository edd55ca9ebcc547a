#pragma once

// Mixed H(div)-conforming virtual element velocity space of order k >= 0.
//
// Local DOF numbering: for each edge, v.n_e at the k+1 Gauss points ordered
// from the edge origin to its end (n_e is the element's outward normal); then
// the internal gradient moments (1/|E|) \int_E v . grad m_{a+1}, a = 1..n_k - 1;
// then the internal orthogonal moments (1/|E|) \int_E v . g^perp_{k,a}.

#include <functional>
#include <vector>

#include "vemkit/geometry.hpp"
#include "vemkit/polybasis.hpp"
#include "vemkit/quadrature.hpp"

namespace vemkit::mcc {

struct ReferenceElement {
  int order = 0;
  int dofs_per_edge = 1;
  int dofs_per_cell = 0;

  explicit ReferenceElement(int k);
  int num_dofs(int num_edges) const { return num_edges * dofs_per_edge + dofs_per_cell; }
};

struct LocalSpaceData {
  int order = 0;
  geometry::Polygon2D polygon;
  polybasis::MonomialBasis basis;  // order k
  int num_dofs = 0;
  int num_edge_dofs = 0;
  int num_grad_dofs = 0;
  int num_perp_dofs = 0;

  polybasis::GradDecomposition decomposition_k;
  polybasis::GradDecomposition decomposition_km1;  // empty for k = 0

  std::vector<quadrature::QuadratureRule> edge_dof_quadrature;  // k+1 Gauss points per edge
  quadrature::QuadratureRule internal_quadrature;

  Eigen::MatrixXd H;         // mass matrix of order k+1 monomials
  Eigen::MatrixXd div_moments;  // \int_E div(phi_j) m_a, n_k x num_dofs
  Eigen::MatrixXd div;       // coefficients of div(phi_j) in P_k, n_k x num_dofs
  Eigen::MatrixXd pi0_k;     // vector basis coefficients, 2 n_k x num_dofs
  Eigen::MatrixXd D;         // DOFs of vector monomials, num_dofs x 2 n_k

  Eigen::MatrixXd vander_k;  // order k monomials at internal quadrature points
};

LocalSpaceData build_mcc_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order = -1);

/// [x-component, y-component] of the projected basis at internal quadrature points.
std::array<Eigen::MatrixXd, 2> mcc_basis_values(const LocalSpaceData& data);

/// |E| (I - D Pi)^T (I - D Pi)
Eigen::MatrixXd mcc_stabilization(const LocalSpaceData& data);

/// Q_h(E) = P_k(E) in scaled monomials.
polybasis::MonomialBasis pressure_basis(const geometry::Polygon2D& polygon, int k);

Eigen::VectorXd interpolate_velocity(const LocalSpaceData& data,
                                     const std::function<Eigen::Vector2d(const Point&)>& v);

}  // namespace vemkit::mcc
