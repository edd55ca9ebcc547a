#include "vemkit/df2d.hpp"

#include <stdexcept>

#include "vemkit/edge_lagrange.hpp"

namespace vemkit::df {

using polybasis::grad_dim;
using polybasis::perp_dim;
using polybasis::poly_dim;

ReferenceElement::ReferenceElement(int k, bool reduced_space)
    : order(k),
      dofs_per_vertex(2),
      dofs_per_edge(2 * (k - 1)),
      perp_dofs(perp_dim(k - 2)),
      div_dofs(poly_dim(2, k - 1) - 1),
      reduced(reduced_space) {
  if (k < 2) throw std::invalid_argument("divergence-free VEM requires k >= 2");
}

namespace {

Eigen::MatrixXd solve_square(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible())
    throw geometry::GeometryError(std::string(what) + ": singular system (degenerate polygon?)");
  return lu.solve(rhs);
}

Eigen::MatrixXd block_diag2(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m.rows(), 2 * m.cols());
  out.topLeftCorner(m.rows(), m.cols()) = m;
  out.bottomRightCorner(m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

LocalSpaceData build_df_local_space(const geometry::Polygon2D& polygon, int k, int quadrature_order) {
  if (k < 2) throw std::invalid_argument("build_df_local_space: k must be at least 2");
  const ReferenceElement ref(k, false);
  const int nv = polygon.num_vertices();
  const int nk = poly_dim(2, k);
  const int nkp1 = poly_dim(2, k + 1);
  const int nkm1 = poly_dim(2, k - 1);
  const int nkm2 = poly_dim(2, k - 2);
  const double area = polygon.area();
  const double h = polygon.diameter();

  LocalSpaceData data{
      .order = k,
      .polygon = polygon,
      .basis = polybasis::MonomialBasis(k, polygon.centroid(), polygon.diameter()),
  };
  data.num_dofs = ref.num_dofs(nv);
  data.num_boundary_dofs = 2 * nv * k;
  data.perp_offset = data.num_boundary_dofs;
  data.num_perp_dofs = ref.perp_dofs;
  data.div_offset = data.perp_offset + data.num_perp_dofs;
  data.num_div_dofs = ref.div_dofs;
  const int ndof = data.num_dofs;
  const auto& basis = data.basis;
  const auto basis_kp1 = basis.with_order(k + 1);

  data.decomposition_km2 = polybasis::build_grad_decomposition(basis.with_order(k - 2));
  data.decomposition_k = polybasis::build_grad_decomposition(basis);
  const Eigen::MatrixXd perp_embedded =
      data.decomposition_km2.t_perp * polybasis::vector_embedding(k - 2, k);  // n^perp_{k-2} x 2 n_k
  const Eigen::MatrixXd& perp_k = data.decomposition_k.t_perp;
  if (perp_embedded.rows() == 0) {
    data.perp_complement = perp_k;
  } else {
    const Eigen::MatrixXd overlap = perp_k * perp_embedded.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap, Eigen::ComputeFullU);
    const auto r = perp_k.rows() - perp_embedded.rows();
    data.perp_complement = svd.matrixU().rightCols(r).transpose() * perp_k;
  }

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
  const Eigen::VectorXd w = quad.weight_vector();
  const Eigen::MatrixXd vander_kp1 = basis_kp1.values(quad.points);
  data.vander_k = vander_kp1.leftCols(nk);
  data.H = vander_kp1.transpose() * w.asDiagonal() * vander_kp1;
  const auto& H = data.H;
  const Eigen::MatrixXd Hk = H.topLeftCorner(nk, nk);
  const Eigen::MatrixXd Hkm1 = H.topLeftCorner(nkm1, nkm1);

  // boundary traces, k+1 Gauss points per edge
  const auto gauss = quadrature::gauss_segment(k + 1);
  const Eigen::MatrixXd lagrange = lagrange_values(lobatto_unit, to_unit_interval(gauss.points));
  data.boundary_quadrature.resize(nv);
  for (int c = 0; c < 2; ++c) data.boundary_traces[c].resize(nv);
  for (int e = 0; e < nv; ++e) {
    const auto& edge = polygon.edge(e);
    data.boundary_quadrature[e] = quadrature::edge_rule(edge.origin, edge.end, k + 1);
    for (int c = 0; c < 2; ++c) {
      Eigen::MatrixXd trace = Eigen::MatrixXd::Zero(k + 1, ndof);
      trace.col(2 * e + c) = lagrange.col(0);
      trace.col(2 * ((e + 1) % nv) + c) = lagrange.col(k);
      for (int m = 1; m < k; ++m) trace.col(2 * nv + 2 * (e * (k - 1) + m - 1) + c) = lagrange.col(m);
      data.boundary_traces[c][e] = std::move(trace);
    }
  }

  // boundary_normal[c][j](a, :) = \int_{dE} v_c m_a n_j for m_a in P_{k+1}
  std::array<std::array<Eigen::MatrixXd, 2>, 2> boundary_normal;
  for (auto& row : boundary_normal)
    for (auto& m : row) m = Eigen::MatrixXd::Zero(nkp1, ndof);
  for (int e = 0; e < nv; ++e) {
    const auto& bq = data.boundary_quadrature[e];
    const Eigen::MatrixXd weighted = bq.weight_vector().asDiagonal() * basis_kp1.values(bq.points);
    const auto& n = polygon.edge(e).normal;
    for (int c = 0; c < 2; ++c) {
      const Eigen::MatrixXd moment = weighted.transpose() * data.boundary_traces[c][e];
      boundary_normal[c][0] += n.x() * moment;
      boundary_normal[c][1] += n.y() * moment;
    }
  }
  const Eigen::MatrixXd flux = boundary_normal[0][0] + boundary_normal[1][1];  // \int (v.n) m_a

  // divergence moments against P_{k-1}
  data.div_moments.resize(nkm1, ndof);
  data.div_moments.row(0) = flux.row(0);
  for (int a = 1; a < nkm1; ++a) {
    data.div_moments.row(a) = (H(0, a) / area) * flux.row(0);
    data.div_moments(a, data.div_offset + a - 1) += area / h;
  }
  data.div = solve_square(Hkm1, data.div_moments, "df divergence");

  // \int v . p_I for p_I in [P_{k-2}]^2 via the G^nabla/G^perp split
  const auto& tkm2 = data.decomposition_km2;
  const int n_grad_km2 = static_cast<int>(tkm2.t_nabla.rows());
  Eigen::MatrixXd g_low = Eigen::MatrixXd::Zero(2 * nkm2, ndof);
  g_low.topRows(n_grad_km2) = flux.middleRows(1, n_grad_km2) - data.div_moments.middleRows(1, n_grad_km2);
  for (int a = 0; a < data.num_perp_dofs; ++a) g_low(n_grad_km2 + a, data.perp_offset + a) = area;
  Eigen::MatrixXd transform_low(2 * nkm2, 2 * nkm2);
  transform_low << tkm2.t_nabla, tkm2.t_perp;
  const Eigen::MatrixXd moments_low = solve_square(transform_low, g_low, "df low-order moments");

  const Eigen::MatrixXd dx = basis.derivative_matrix(0);
  const Eigen::MatrixXd dy = basis.derivative_matrix(1);
  const std::array<const Eigen::MatrixXd*, 2> derivative{&dx, &dy};
  const Eigen::MatrixXd lap = dx * dx + dy * dy;

  // Pi nabla, componentwise
  Eigen::MatrixXd G = dx.transpose() * Hk * dx + dy.transpose() * Hk * dy;
  G.row(0) = Hk.row(0);
  data.pi_nabla.resize(2 * nk, ndof);
  for (int c = 0; c < 2; ++c) {
    const auto low = moments_low.middleRows(c * nkm2, nkm2);  // \int v_c m_b, b < n_{k-2}
    Eigen::MatrixXd rhs = dx.transpose() * boundary_normal[c][0].topRows(nk) +
                          dy.transpose() * boundary_normal[c][1].topRows(nk) -
                          lap.topRows(nkm2).transpose() * low;
    rhs.row(0) = low.row(0);
    data.pi_nabla.middleRows(c * nk, nk) = solve_square(G, rhs, "df pi_nabla");
  }

  // L2 projection of the velocity gradient onto P_{k-1}
  for (int c = 0; c < 2; ++c) {
    const auto low = moments_low.middleRows(c * nkm2, nkm2);
    for (int j = 0; j < 2; ++j) {
      const Eigen::MatrixXd rhs = boundary_normal[c][j].topRows(nkm1) -
                                  derivative[j]->block(0, 0, nkm2, nkm1).transpose() * low;
      data.pi0_km1_grad[c][j] = solve_square(Hkm1, rhs, "df pi0_km1_grad");
    }
  }

  // Pi0_k: G^nabla_k by parts, embedded G^perp_{k-2} from DOFs, the rest by enhancement
  const Eigen::MatrixXd Hv = block_diag2(Hk);
  const auto& tk = data.decomposition_k;
  const int n_grad_k = static_cast<int>(tk.t_nabla.rows());
  Eigen::MatrixXd g_high(2 * nk, ndof);
  g_high.topRows(n_grad_k) = flux.middleRows(1, n_grad_k) - H.block(0, 1, nkm1, n_grad_k).transpose() * data.div;
  g_high.middleRows(n_grad_k, data.num_perp_dofs).setZero();
  for (int a = 0; a < data.num_perp_dofs; ++a) g_high(n_grad_k + a, data.perp_offset + a) = area;
  g_high.bottomRows(data.perp_complement.rows()) = data.perp_complement * Hv * data.pi_nabla;
  Eigen::MatrixXd transform_high(2 * nk, 2 * nk);
  transform_high << tk.t_nabla, perp_embedded, data.perp_complement;
  const Eigen::MatrixXd moments_high = solve_square(transform_high, g_high, "df high-order moments");
  data.pi0_k = solve_square(Hv, moments_high, "df pi0_k");

  // DOFs of the vector monomials
  data.D = Eigen::MatrixXd::Zero(ndof, 2 * nk);
  const Eigen::MatrixXd point_values = basis.values(data.dof_points);
  for (int i = 0; i < static_cast<int>(data.dof_points.size()); ++i) {
    data.D.block(2 * i, 0, 1, nk) = point_values.row(i);
    data.D.block(2 * i + 1, nk, 1, nk) = point_values.row(i);
  }
  if (data.num_perp_dofs > 0) data.D.middleRows(data.perp_offset, data.num_perp_dofs) = perp_embedded * Hv / area;
  Eigen::MatrixXd mean_free(nk, data.num_div_dofs);  // \int m_b (m_{a+1} - mean)
  for (int a = 0; a < data.num_div_dofs; ++a)
    mean_free.col(a) = Hk.col(a + 1) - Hk.col(0) * (H(0, a + 1) / area);
  const double scale = h / area;
  data.D.block(data.div_offset, 0, data.num_div_dofs, nk) = scale * (dx.transpose() * mean_free).transpose();
  data.D.block(data.div_offset, nk, data.num_div_dofs, nk) = scale * (dy.transpose() * mean_free).transpose();
  return data;
}

Eigen::MatrixXd df_divergence_matrix(const LocalSpaceData& data) { return data.div_moments; }

Eigen::MatrixXd df_stabilization(const LocalSpaceData& data) {
  const int n = data.num_dofs;
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - data.D * data.pi_nabla;
  return residual.transpose() * residual;
}

Eigen::MatrixXd df_consistency_matrix(const LocalSpaceData& data) {
  const int nkm1 = static_cast<int>(data.pi0_km1_grad[0][0].rows());
  const auto v = data.vander_k.leftCols(nkm1);
  const Eigen::VectorXd w = data.internal_quadrature.weight_vector();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(data.num_dofs, data.num_dofs);
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < 2; ++j) {
      const Eigen::MatrixXd g = v * data.pi0_km1_grad[c][j];
      out += g.transpose() * w.asDiagonal() * g;
    }
  return out;
}

ReductionMap reduce_df_space(const LocalSpaceData& data) {
  ReductionMap map;
  for (int i = 0; i < data.num_dofs; ++i)
    if (i < data.div_offset || i >= data.div_offset + data.num_div_dofs) map.kept.push_back(i);
  map.transform = Eigen::MatrixXd::Zero(data.num_dofs, static_cast<Eigen::Index>(map.kept.size()));
  for (std::size_t j = 0; j < map.kept.size(); ++j) map.transform(map.kept[j], static_cast<Eigen::Index>(j)) = 1.0;
  map.pressure_dofs = 1;
  return map;
}

Eigen::VectorXd interpolate_velocity(const LocalSpaceData& data,
                                     const std::function<Eigen::Vector2d(const Point&)>& v) {
  const int k = data.order;
  const int nk = data.basis.size();
  const double area = data.polygon.area();
  Eigen::VectorXd dofs(data.num_dofs);
  for (std::size_t i = 0; i < data.dof_points.size(); ++i) dofs.segment<2>(2 * static_cast<Eigen::Index>(i)) = v(data.dof_points[i]);

  const auto& quad = data.internal_quadrature;
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(2 * nk);  // \int v . p_I
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::Vector2d value = v(quad.points[q]) * quad.weights[q];
    moments.head(nk) += value.x() * data.vander_k.row(q).transpose();
    moments.tail(nk) += value.y() * data.vander_k.row(q).transpose();
  }
  if (data.num_perp_dofs > 0)
    dofs.segment(data.perp_offset, data.num_perp_dofs) =
        data.decomposition_km2.t_perp * polybasis::vector_embedding(k - 2, k) * moments / area;

  // \int div v (m_a - mean) = \int_{dE} (v.n)(m_a - mean) - \int v . grad m_a
  const auto& basis = data.basis;
  const int nkm1 = data.num_div_dofs + 1;
  Eigen::VectorXd boundary = Eigen::VectorXd::Zero(nkm1);
  double total_flux = 0.0;
  for (int e = 0; e < data.polygon.num_vertices(); ++e) {
    const auto& edge = data.polygon.edge(e);
    const auto rule = quadrature::edge_rule(edge.origin, edge.end, k + 3);
    const Eigen::MatrixXd vals = basis.values(rule.points).leftCols(nkm1);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double vn = v(rule.points[q]).dot(edge.normal) * rule.weights[q];
      boundary += vn * vals.row(q).transpose();
      total_flux += vn;
    }
  }
  const Eigen::MatrixXd dx = basis.derivative_matrix(0);
  const Eigen::MatrixXd dy = basis.derivative_matrix(1);
  const double scale = data.polygon.diameter() / area;
  for (int a = 0; a < data.num_div_dofs; ++a) {
    const double mean = data.H(0, a + 1) / area;
    const double interior = dx.col(a + 1).dot(moments.head(nk)) + dy.col(a + 1).dot(moments.tail(nk));
    dofs(data.div_offset + a) = scale * (boundary(a + 1) - mean * total_flux - interior);
  }
  return dofs;
}

}  // namespace vemkit::df
