#pragma once

// Primal H^1-conforming virtual element space of order k >= 1 on a polygon.
//
// Local DOF numbering: vertex values (N_v), then for every edge the values at
// the k-1 interior Gauss-Lobatto points ordered from the edge origin to its
// end (N_e (k-1)), then the scaled internal moments
//   (1/|E|) \int_E v m_a,   a = 1..n_{k-2}.

#include <array>
#include <functional>
#include <vector>

#include "vemkit/geometry.hpp"
#include "vemkit/polybasis.hpp"
#include "vemkit/quadrature.hpp"

namespace vemkit::pcc {

enum class ProjectionType { Pi0km1, Pi0k, PiNabla, Pi0km1Der, PiNablaDer };
enum class Stabilization { dofi_dofi, d_recipe };

Stabilization parse_stabilization(const std::string& name);

/// DOF counts common to every element of a mesh.
struct ReferenceElement {
  int order = 1;
  int dofs_per_vertex = 1;
  int dofs_per_edge = 0;
  int dofs_per_cell = 0;

  explicit ReferenceElement(int k);
  int num_dofs(int num_vertices) const {
    return num_vertices * (dofs_per_vertex + dofs_per_edge) + dofs_per_cell;
  }
};

struct LocalSpaceData {
  int order = 1;
  geometry::Polygon2D polygon;
  polybasis::MonomialBasis basis;
  int num_dofs = 0;
  int num_vertex_dofs = 0;
  int num_edge_dofs = 0;
  int internal_offset = 0;

  /// Interior GL nodes on [0, 1] and the full GL node set used for traces.
  std::vector<double> lobatto_nodes;
  std::vector<Point> dof_points;  // vertices then edge points

  quadrature::QuadratureRule internal_quadrature;
  /// per-edge Gauss points (boundary integrals) and trace matrices:
  /// boundary_traces[e](q, j) = phi_j at the q-th Gauss point of edge e
  std::vector<quadrature::QuadratureRule> boundary_quadrature;
  std::vector<Eigen::MatrixXd> boundary_traces;

  Eigen::MatrixXd H;            // monomial mass matrix, order k
  Eigen::MatrixXd D;            // DOFs of monomials, num_dofs x n_k
  Eigen::MatrixXd pi_nabla;     // n_k x num_dofs
  Eigen::MatrixXd pi0_km2;      // n_{k-2} x num_dofs
  Eigen::MatrixXd pi0_km1;      // n_{k-1} x num_dofs
  Eigen::MatrixXd pi0_k;        // n_k x num_dofs
  std::array<Eigen::MatrixXd, 2> pi0_km1_grad;  // n_{k-1} x num_dofs each

  Eigen::MatrixXd vander_k;     // monomials of order k at internal quadrature points
};

/// Builds DOFs, projector matrices and quadrature caches.
/// `quadrature_order` < 0 selects the default 2k + 2.
LocalSpaceData build_pcc_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order = -1);

/// Projected basis at the internal quadrature points, (N_q x N_dof).
Eigen::MatrixXd basis_function_values(const LocalSpaceData& data, ProjectionType projection);

/// [d/dx, d/dy] of the projected basis at the internal quadrature points.
/// Pi0km1Der uses the L2 projection of the gradient, PiNablaDer the gradient
/// of the H1 projection.
std::array<Eigen::MatrixXd, 2> basis_function_derivative_values(const LocalSpaceData& data,
                                                                 ProjectionType projection);

/// (I - D Pi)^T W (I - D Pi) with W = I (dofi-dofi) or the D-recipe weights
/// max(1, consistency_diag_i).  An empty consistency diagonal means D = I.
Eigen::MatrixXd stabilization_matrix(const LocalSpaceData& data, Stabilization recipe,
                                     const Eigen::VectorXd& consistency_diag = {});

/// \int_E grad_proj(phi_i) . grad_proj(phi_j) with the Pi0_{k-1} gradient.
Eigen::MatrixXd consistency_matrix(const LocalSpaceData& data);

/// DOF vector of a smooth function.
Eigen::VectorXd interpolate_function(const LocalSpaceData& data, const std::function<double(const Point&)>& f);

}  // namespace vemkit::pcc
