#pragma once

// Divergence-free (Stokes) virtual element velocity space of order k >= 2.
//
// Local DOF numbering, components interleaved (x, y):
//   vertex i                  -> 2 i + c
//   edge e, interior GL pt m  -> 2 N_v + 2 (e (k-1) + m) + c
//   internal perp moments     -> (1/|E|) \int_E v . g^perp_{k-2,a}
//   internal div moments      -> (h_E/|E|) \int_E div(v) (m_b - mean(m_b)), b = 2..n_{k-1}
// The div moments use mean-free monomials so that the reduced space
// {div v in P_0} is exactly the subspace where they vanish.

#include <array>
#include <functional>
#include <vector>

#include "vemkit/geometry.hpp"
#include "vemkit/polybasis.hpp"
#include "vemkit/quadrature.hpp"

namespace vemkit::df {

struct ReferenceElement {
  int order = 2;
  int dofs_per_vertex = 2;
  int dofs_per_edge = 2;
  int perp_dofs = 0;
  int div_dofs = 0;
  bool reduced = false;

  ReferenceElement(int k, bool reduced);
  int dofs_per_cell() const { return perp_dofs + (reduced ? 0 : div_dofs); }
  int num_dofs(int num_vertices) const {
    return num_vertices * (dofs_per_vertex + dofs_per_edge) + dofs_per_cell();
  }
  int pressure_dofs() const { return reduced ? 1 : polybasis::poly_dim(2, order - 1); }
};

struct LocalSpaceData {
  int order = 2;
  geometry::Polygon2D polygon;
  polybasis::MonomialBasis basis;  // order k
  int num_dofs = 0;
  int num_boundary_dofs = 0;
  int perp_offset = 0;
  int num_perp_dofs = 0;
  int div_offset = 0;
  int num_div_dofs = 0;

  std::vector<double> lobatto_nodes;  // interior GL nodes on [0, 1]
  std::vector<Point> dof_points;      // vertices then edge points (one per pair of DOFs)

  quadrature::QuadratureRule internal_quadrature;
  std::vector<quadrature::QuadratureRule> boundary_quadrature;
  std::array<std::vector<Eigen::MatrixXd>, 2> boundary_traces;  // [component][edge]

  polybasis::GradDecomposition decomposition_km2;
  polybasis::GradDecomposition decomposition_k;
  Eigen::MatrixXd perp_complement;  // rows span G^perp_k minus the embedded G^perp_{k-2}

  Eigen::MatrixXd H;            // mass matrix of order k+1 monomials
  Eigen::MatrixXd div_moments;  // B_E = \int div(phi_j) m_a, n_{k-1} x num_dofs
  Eigen::MatrixXd div;          // coefficients of div(phi_j) in P_{k-1}
  Eigen::MatrixXd pi_nabla;     // 2 n_k x num_dofs
  Eigen::MatrixXd pi0_k;        // 2 n_k x num_dofs
  /// pi0_km1_grad[c][j]: d v_c / d x_j projected onto P_{k-1}
  std::array<std::array<Eigen::MatrixXd, 2>, 2> pi0_km1_grad;
  Eigen::MatrixXd D;            // DOFs of vector monomials, num_dofs x 2 n_k

  Eigen::MatrixXd vander_k;
};

LocalSpaceData build_df_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order = -1);

/// B_E with (B_E)_{a j} = \int_E div(phi_j) m_a for the pressure basis P_{k-1}.
Eigen::MatrixXd df_divergence_matrix(const LocalSpaceData& data);

/// Componentwise dofi-dofi: (I - D Pi_nabla)^T (I - D Pi_nabla).
Eigen::MatrixXd df_stabilization(const LocalSpaceData& data);

/// \int_E grad_proj(phi_i) : grad_proj(phi_j) with the Pi0_{k-1} gradient.
Eigen::MatrixXd df_consistency_matrix(const LocalSpaceData& data);

struct ReductionMap {
  std::vector<int> kept;        // local DOFs of the reduced velocity space
  Eigen::MatrixXd transform;    // num_dofs x kept.size(): full = transform * reduced
  int pressure_dofs = 1;
};

/// Restriction to {div v in P_0}: the div moments vanish and are dropped.
ReductionMap reduce_df_space(const LocalSpaceData& data);

Eigen::VectorXd interpolate_velocity(const LocalSpaceData& data,
                                     const std::function<Eigen::Vector2d(const Point&)>& v);

}  // namespace vemkit::df
