#include "vemkit/mcc2d.hpp"

#include <stdexcept>

namespace vemkit::mcc {

using polybasis::grad_dim;
using polybasis::perp_dim;
using polybasis::poly_dim;

ReferenceElement::ReferenceElement(int k)
    : order(k), dofs_per_edge(k + 1), dofs_per_cell(grad_dim(k - 1) * (k >= 1) + perp_dim(k)) {
  if (k < 0) throw std::invalid_argument("mixed VEM requires k >= 0");
}

namespace {

Eigen::MatrixXd solve_square(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible())
    throw geometry::GeometryError(std::string(what) + ": singular system (degenerate polygon?)");
  return lu.solve(rhs);
}

}  // namespace

LocalSpaceData build_mcc_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order) {
  if (k < 0) throw std::invalid_argument("build_mcc_local_space: k must be non-negative");
  const ReferenceElement ref(k);
  const int ne = polygon.num_vertices();
  const int nk = poly_dim(2, k);
  const int nkp1 = poly_dim(2, k + 1);
  const double area = polygon.area();

  LocalSpaceData data{
      .order = k,
      .polygon = polygon,
      .basis = polybasis::MonomialBasis(k, polygon.centroid(), polygon.diameter()),
  };
  data.num_edge_dofs = ne * (k + 1);
  data.num_grad_dofs = k >= 1 ? grad_dim(k - 1) : 0;
  data.num_perp_dofs = perp_dim(k);
  data.num_dofs = ref.num_dofs(ne);
  const int ndof = data.num_dofs;
  const int grad_offset = data.num_edge_dofs;
  const int perp_offset = grad_offset + data.num_grad_dofs;
  const auto& basis = data.basis;
  const polybasis::MonomialBasis basis_kp1 = basis.with_order(k + 1);

  data.decomposition_k = polybasis::build_grad_decomposition(basis);
  if (k >= 1) data.decomposition_km1 = polybasis::build_grad_decomposition(basis.with_order(k - 1));

  data.internal_quadrature = quadrature::polygon_rule(polygon, quadrature_order < 0 ? 2 * k + 2 : quadrature_order);
  const auto& quad = data.internal_quadrature;
  const Eigen::VectorXd w = quad.weight_vector();
  const Eigen::MatrixXd vander_kp1 = basis_kp1.values(quad.points);
  data.vander_k = vander_kp1.leftCols(nk);
  data.H = vander_kp1.transpose() * w.asDiagonal() * vander_kp1;
  const Eigen::MatrixXd Hk = data.H.topLeftCorner(nk, nk);

  data.edge_dof_quadrature.resize(ne);
  for (int e = 0; e < ne; ++e)
    data.edge_dof_quadrature[e] = quadrature::edge_rule(polygon.edge(e).origin, polygon.edge(e).end, k + 1);

  // \int_{dE} (v.n) q for q in P_{k+1}: the k+1 Gauss points are exact for degree 2k+1
  Eigen::MatrixXd flux = Eigen::MatrixXd::Zero(nkp1, ndof);
  for (int e = 0; e < ne; ++e) {
    const auto& eq = data.edge_dof_quadrature[e];
    const Eigen::MatrixXd vals = basis_kp1.values(eq.points);
    for (int q = 0; q <= k; ++q) flux.col(e * (k + 1) + q) = eq.weights[q] * vals.row(q).transpose();
  }

  // divergence: \int div v m_a = \int_{dE} (v.n) m_a - \int v . grad m_a
  data.div_moments = flux.topRows(nk);
  for (int a = 1; a < nk; ++a) data.div_moments(a, grad_offset + a - 1) -= area;
  data.div = solve_square(Hk, data.div_moments, "mcc divergence");

  // moments against the G^nabla_k / G^perp_k basis
  const auto& tk = data.decomposition_k;
  const int n_grad_k = static_cast<int>(tk.t_nabla.rows());
  Eigen::MatrixXd g_moments = Eigen::MatrixXd::Zero(2 * nk, ndof);
  g_moments.topRows(n_grad_k) = flux.bottomRows(n_grad_k) -
                                data.H.block(0, 1, nk, n_grad_k).transpose() * data.div;
  for (int a = 0; a < data.num_perp_dofs; ++a) g_moments(n_grad_k + a, perp_offset + a) = area;
  Eigen::MatrixXd transform(2 * nk, 2 * nk);
  transform << tk.t_nabla, tk.t_perp;
  const Eigen::MatrixXd moments = solve_square(transform, g_moments, "mcc G-split");  // \int v . p_I

  Eigen::MatrixXd Hv = Eigen::MatrixXd::Zero(2 * nk, 2 * nk);
  Hv.topLeftCorner(nk, nk) = Hk;
  Hv.bottomRightCorner(nk, nk) = Hk;
  data.pi0_k = solve_square(Hv, moments, "mcc pi0_k");

  // DOFs of the vector monomials
  data.D = Eigen::MatrixXd::Zero(ndof, 2 * nk);
  for (int e = 0; e < ne; ++e) {
    const auto& n = polygon.edge(e).normal;
    const Eigen::MatrixXd vals = basis.values(data.edge_dof_quadrature[e].points);
    data.D.block(e * (k + 1), 0, k + 1, nk) = n.x() * vals;
    data.D.block(e * (k + 1), nk, k + 1, nk) = n.y() * vals;
  }
  if (k >= 1) {
    const Eigen::MatrixXd embed = polybasis::vector_embedding(k - 1, k);
    data.D.middleRows(grad_offset, data.num_grad_dofs) = data.decomposition_km1.t_nabla * embed * Hv / area;
  }
  if (data.num_perp_dofs > 0) data.D.middleRows(perp_offset, data.num_perp_dofs) = tk.t_perp * Hv / area;
  return data;
}

std::array<Eigen::MatrixXd, 2> mcc_basis_values(const LocalSpaceData& data) {
  const int nk = data.basis.size();
  return {data.vander_k * data.pi0_k.topRows(nk), data.vander_k * data.pi0_k.bottomRows(nk)};
}

Eigen::MatrixXd mcc_stabilization(const LocalSpaceData& data) {
  const int n = data.num_dofs;
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - data.D * data.pi0_k;
  return data.polygon.area() * residual.transpose() * residual;
}

polybasis::MonomialBasis pressure_basis(const geometry::Polygon2D& polygon, int k) {
  return polybasis::MonomialBasis(k, polygon.centroid(), polygon.diameter());
}

Eigen::VectorXd interpolate_velocity(const LocalSpaceData& data,
                                     const std::function<Eigen::Vector2d(const Point&)>& v) {
  const int k = data.order;
  const int nk = data.basis.size();
  const double area = data.polygon.area();
  Eigen::VectorXd dofs(data.num_dofs);
  for (int e = 0; e < data.polygon.num_vertices(); ++e) {
    const auto& n = data.polygon.edge(e).normal;
    const auto& pts = data.edge_dof_quadrature[e].points;
    for (int q = 0; q <= k; ++q) dofs(e * (k + 1) + q) = v(pts[q]).dot(n);
  }
  if (data.num_grad_dofs + data.num_perp_dofs == 0) return dofs;

  // \int v . p_I for the vector monomials of order k
  const auto& quad = data.internal_quadrature;
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(2 * nk);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::Vector2d value = v(quad.points[q]) * quad.weights[q];
    moments.head(nk) += value.x() * data.vander_k.row(q).transpose();
    moments.tail(nk) += value.y() * data.vander_k.row(q).transpose();
  }
  const int grad_offset = data.num_edge_dofs;
  if (k >= 1)
    dofs.segment(grad_offset, data.num_grad_dofs) =
        data.decomposition_km1.t_nabla * polybasis::vector_embedding(k - 1, k) * moments / area;
  if (data.num_perp_dofs > 0)
    dofs.segment(grad_offset + data.num_grad_dofs, data.num_perp_dofs) =
        data.decomposition_k.t_perp * moments / area;
  return dofs;
}

}  // namespace vemkit::mcc
