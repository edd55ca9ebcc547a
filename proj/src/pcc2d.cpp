#include "vemkit/pcc2d.hpp"

#include <stdexcept>
#include <string>

#include "vemkit/edge_lagrange.hpp"

namespace vemkit::pcc {

using polybasis::poly_dim;

Stabilization parse_stabilization(const std::string& name) {
  if (name == "dofi_dofi") return Stabilization::dofi_dofi;
  if (name == "d_recipe") return Stabilization::d_recipe;
  throw std::invalid_argument("unknown stabilization '" + name + "'");
}

ReferenceElement::ReferenceElement(int k)
    : order(k), dofs_per_vertex(1), dofs_per_edge(k - 1), dofs_per_cell(poly_dim(2, k - 2)) {
  if (k < 1) throw std::invalid_argument("primal VEM requires k >= 1");
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

LocalSpaceData build_pcc_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order) {
  if (k < 1) throw std::invalid_argument("build_pcc_local_space: k must be at least 1");
  const ReferenceElement ref(k);
  const int nv = polygon.num_vertices();
  const int nk = poly_dim(2, k);
  const int nkm1 = poly_dim(2, k - 1);
  const int nkm2 = poly_dim(2, k - 2);
  const double area = polygon.area();

  LocalSpaceData data{
      .order = k,
      .polygon = polygon,
      .basis = polybasis::MonomialBasis(k, polygon.centroid(), polygon.diameter()),
  };
  data.num_vertex_dofs = nv;
  data.num_edge_dofs = nv * (k - 1);
  data.internal_offset = nv + nv * (k - 1);
  data.num_dofs = ref.num_dofs(nv);
  const int ndof = data.num_dofs;
  const auto& basis = data.basis;

  // DOF points
  const auto lobatto = quadrature::gauss_lobatto_segment(k + 1);
  const std::vector<double> lobatto_unit = to_unit_interval(lobatto.points);
  data.lobatto_nodes.assign(lobatto_unit.begin() + 1, lobatto_unit.end() - 1);
  data.dof_points = polygon.vertices();
  for (int e = 0; e < nv; ++e) {
    const auto& edge = polygon.edge(e);
    for (double s : data.lobatto_nodes) data.dof_points.push_back(edge.origin + s * (edge.end - edge.origin));
  }

  data.internal_quadrature = quadrature::polygon_rule(polygon, quadrature_order < 0 ? 2 * k + 2 : quadrature_order);
  const auto& quad = data.internal_quadrature;
  data.vander_k = basis.values(quad.points);
  const Eigen::VectorXd w = quad.weight_vector();
  data.H = data.vander_k.transpose() * w.asDiagonal() * data.vander_k;
  const auto& H = data.H;

  // boundary traces: Lagrange basis on the full GL node set of each edge
  const auto gauss = quadrature::gauss_segment(k + 1);
  const std::vector<double> gauss_unit = to_unit_interval(gauss.points);
  const Eigen::MatrixXd lagrange = lagrange_values(lobatto_unit, gauss_unit);
  data.boundary_quadrature.resize(nv);
  data.boundary_traces.resize(nv);
  for (int e = 0; e < nv; ++e) {
    const auto& edge = polygon.edge(e);
    data.boundary_quadrature[e] = quadrature::edge_rule(edge.origin, edge.end, k + 1);
    Eigen::MatrixXd trace = Eigen::MatrixXd::Zero(k + 1, ndof);
    trace.col(e) = lagrange.col(0);
    trace.col((e + 1) % nv) = lagrange.col(k);
    for (int m = 1; m < k; ++m) trace.col(nv + e * (k - 1) + (m - 1)) = lagrange.col(m);
    data.boundary_traces[e] = std::move(trace);
  }

  // DOFs of monomials
  data.D.resize(ndof, nk);
  data.D.topRows(data.internal_offset) = basis.values(data.dof_points);
  if (nkm2 > 0) data.D.bottomRows(nkm2) = H.topRows(nkm2) / area;

  const Eigen::MatrixXd dx = basis.derivative_matrix(0);
  const Eigen::MatrixXd dy = basis.derivative_matrix(1);
  const Eigen::MatrixXd lap = dx * dx + dy * dy;

  // Pi nabla: G c = B
  Eigen::MatrixXd G = dx.transpose() * H * dx + dy.transpose() * H * dy;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, ndof);
  for (int e = 0; e < nv; ++e) {
    const auto& bq = data.boundary_quadrature[e];
    const auto& n = polygon.edge(e).normal;
    const auto grads = basis.gradients(bq.points);
    const Eigen::MatrixXd normal_derivative = grads[0] * n.x() + grads[1] * n.y();  // q x n_k
    B += normal_derivative.transpose() * bq.weight_vector().asDiagonal() * data.boundary_traces[e];
  }
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nkm2; ++b) B(a, data.internal_offset + b) -= area * lap(b, a);
  if (k == 1) {
    B.row(0).setZero();
    G.row(0).setZero();
    for (int e = 0; e < nv; ++e) {
      const auto& bq = data.boundary_quadrature[e];
      const Eigen::RowVectorXd wt = bq.weight_vector().transpose();
      B.row(0) += wt * data.boundary_traces[e];
      G.row(0) += wt * basis.values(bq.points);
    }
  } else {
    B.row(0).setZero();
    B(0, data.internal_offset) = area;
    G.row(0) = H.row(0);
  }
  data.pi_nabla = solve_square(G, B, "pi_nabla");

  // L2 projections
  Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(nk, ndof);  // \int phi_j m_a
  for (int a = 0; a < nkm2; ++a) moments(a, data.internal_offset + a) = area;
  moments.bottomRows(nk - nkm2) = (H * data.pi_nabla).bottomRows(nk - nkm2);
  data.pi0_k = solve_square(H, moments, "pi0_k");
  data.pi0_km1 = solve_square(H.topLeftCorner(nkm1, nkm1), moments.topRows(nkm1), "pi0_km1");
  if (nkm2 > 0)
    data.pi0_km2 = solve_square(H.topLeftCorner(nkm2, nkm2), moments.topRows(nkm2), "pi0_km2");
  else
    data.pi0_km2.resize(0, ndof);

  // L2 projection of the gradient: by parts against m_a in P_{k-1}
  const std::array<const Eigen::MatrixXd*, 2> derivative{&dx, &dy};
  for (int c = 0; c < 2; ++c) {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nkm1, ndof);
    for (int e = 0; e < nv; ++e) {
      const auto& bq = data.boundary_quadrature[e];
      const double nc = polygon.edge(e).normal(c);
      const Eigen::MatrixXd vals = basis.values(bq.points).leftCols(nkm1);
      rhs += nc * vals.transpose() * bq.weight_vector().asDiagonal() * data.boundary_traces[e];
    }
    for (int a = 0; a < nkm1; ++a)
      for (int b = 0; b < nkm2; ++b) rhs(a, data.internal_offset + b) -= area * (*derivative[c])(b, a);
    data.pi0_km1_grad[c] = solve_square(H.topLeftCorner(nkm1, nkm1), rhs, "pi0_km1_grad");
  }
  return data;
}

Eigen::MatrixXd basis_function_values(const LocalSpaceData& data, ProjectionType projection) {
  switch (projection) {
    case ProjectionType::Pi0k: return data.vander_k * data.pi0_k;
    case ProjectionType::PiNabla: return data.vander_k * data.pi_nabla;
    case ProjectionType::Pi0km1:
      return data.vander_k.leftCols(data.pi0_km1.rows()) * data.pi0_km1;
    default: throw std::invalid_argument("basis_function_values: not a value projection");
  }
}

std::array<Eigen::MatrixXd, 2> basis_function_derivative_values(const LocalSpaceData& data,
                                                                 ProjectionType projection) {
  if (projection == ProjectionType::Pi0km1Der) {
    const auto v = data.vander_k.leftCols(data.pi0_km1_grad[0].rows());
    return {v * data.pi0_km1_grad[0], v * data.pi0_km1_grad[1]};
  }
  if (projection == ProjectionType::PiNablaDer) {
    const auto g = data.basis.gradients(data.internal_quadrature.points);
    return {g[0] * data.pi_nabla, g[1] * data.pi_nabla};
  }
  throw std::invalid_argument("basis_function_derivative_values: not a derivative projection");
}

Eigen::MatrixXd consistency_matrix(const LocalSpaceData& data) {
  const auto g = basis_function_derivative_values(data, ProjectionType::Pi0km1Der);
  const Eigen::VectorXd w = data.internal_quadrature.weight_vector();
  return g[0].transpose() * w.asDiagonal() * g[0] + g[1].transpose() * w.asDiagonal() * g[1];
}

Eigen::MatrixXd stabilization_matrix(const LocalSpaceData& data, Stabilization recipe,
                                     const Eigen::VectorXd& consistency_diag) {
  const int n = data.num_dofs;
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - data.D * data.pi_nabla;
  if (recipe == Stabilization::dofi_dofi) return residual.transpose() * residual;
  const Eigen::VectorXd diag =
      consistency_diag.size() == n ? consistency_diag : Eigen::VectorXd(consistency_matrix(data).diagonal());
  const Eigen::VectorXd weights = diag.cwiseMax(1.0);
  return residual.transpose() * weights.asDiagonal() * residual;
}

Eigen::VectorXd interpolate_function(const LocalSpaceData& data, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd dofs(data.num_dofs);
  for (int i = 0; i < data.internal_offset; ++i) dofs(i) = f(data.dof_points[i]);
  const int nkm2 = data.num_dofs - data.internal_offset;
  if (nkm2 > 0) {
    const auto& quad = data.internal_quadrature;
    Eigen::VectorXd fw(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) fw(q) = f(quad.points[q]) * quad.weights[q];
    dofs.tail(nkm2) = data.vander_k.leftCols(nkm2).transpose() * fw / data.polygon.area();
  }
  return dofs;
}

}  // namespace vemkit::pcc
