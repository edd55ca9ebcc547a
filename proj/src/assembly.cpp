#include "vemkit/assembly.hpp"

#include <algorithm>
#include <numeric>

#include "vemkit/df2d.hpp"
#include "vemkit/edge_lagrange.hpp"
#include "vemkit/mcc2d.hpp"
#include "vemkit/quadrature.hpp"

namespace vemkit::pde {

using polybasis::poly_dim;

Eigen::VectorXd gather(const Field& field, const mesh::Mesh2D& mesh, int cell, const Eigen::VectorXd& x) {
  const auto slots = local_to_global(field.table, mesh, cell, field.orientation);
  Eigen::VectorXd out(static_cast<Eigen::Index>(slots.size()));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    out(static_cast<Eigen::Index>(i)) = s.sign * (s.strong ? field.strong_values(s.index) : x(field.offset + s.index));
  }
  return out;
}

namespace {

std::vector<int> element_sequence(const mesh::Mesh2D& mesh, std::span<const int> order) {
  if (!order.empty()) {
    std::vector<int> seq(order.begin(), order.end());
    std::vector<int> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = static_cast<int>(sorted.size()) == mesh.num_cells();
    for (std::size_t i = 0; permutation && i < sorted.size(); ++i) permutation = sorted[i] == static_cast<int>(i);
    if (!permutation) throw std::invalid_argument("element order must list every cell once");
    return seq;
  }
  std::vector<int> seq(mesh.num_cells());
  std::iota(seq.begin(), seq.end(), 0);
  return seq;
}

Field make_field(DofTable table, Orientation orientation, int offset) {
  Field f{std::move(table), orientation, {}, offset};
  f.strong_values = Eigen::VectorXd::Zero(f.table.num_strong);
  return f;
}

void record_strong(Field& field, const std::vector<Slot>& slots, const Eigen::VectorXd& local) {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].strong) field.strong_values(slots[i].index) = slots[i].sign * local(static_cast<Eigen::Index>(i));
}

void scatter_matrix(LinearSystem& sys, const Field& rf, const std::vector<Slot>& rs, const Field& cf,
                    const std::vector<Slot>& cs, const Eigen::MatrixXd& m) {
  for (std::size_t a = 0; a < rs.size(); ++a) {
    if (rs[a].strong) continue;
    const int row = rf.offset + rs[a].index;
    for (std::size_t b = 0; b < cs.size(); ++b) {
      const double v = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * rs[a].sign * cs[b].sign;
      if (v == 0.0) continue;
      if (cs[b].strong)
        sys.rhs(row) -= v * cf.strong_values(cs[b].index);
      else
        sys.add(row, cf.offset + cs[b].index, v);
    }
  }
}

void scatter_vector(LinearSystem& sys, const Field& rf, const std::vector<Slot>& rs, const Eigen::VectorXd& v) {
  for (std::size_t a = 0; a < rs.size(); ++a)
    if (!rs[a].strong) sys.rhs(rf.offset + rs[a].index) += rs[a].sign * v(static_cast<Eigen::Index>(a));
}

bool edge_is_weak(const mesh::Mesh2D& mesh, int e, const BoundaryConditionSpec& bc) {
  const int marker = mesh.edge(e).marker;
  if (marker == 0) return false;
  const auto it = bc.find(marker);
  return it != bc.end() && it->second.kind == DofKind::weak;
}

double spectral_norm(const Eigen::Matrix2d& m) {
  return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
}

/// Full GL node set on [0, 1] from its interior nodes.
std::vector<double> full_lobatto(const std::vector<double>& interior) {
  std::vector<double> out{0.0};
  out.insert(out.end(), interior.begin(), interior.end());
  out.push_back(1.0);
  return out;
}

/// Per local edge i: \int_e g(x) phi_j for the primal trace basis, added
/// into `out` (indexed by local DOF).
void primal_edge_load(const pcc::LocalSpaceData& data, int i,
                      const std::function<double(const Point&, const Eigen::Vector2d&)>& g, Eigen::VectorXd& out) {
  const int k = data.order;
  const int nv = data.polygon.num_vertices();
  const auto& edge = data.polygon.edge(i);
  const auto rule = quadrature::edge_rule(edge.origin, edge.end, k + 4);
  const auto unit = to_unit_interval(quadrature::gauss_segment(k + 4).points);
  const Eigen::MatrixXd lagr = lagrange_values(full_lobatto(data.lobatto_nodes), unit);
  std::vector<int> cols{i, (i + 1) % nv};
  for (int m = 1; m < k; ++m) cols.push_back(nv + i * (k - 1) + m - 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double gw = g(rule.points[q], edge.normal) * rule.weights[q];
    out(cols[0]) += gw * lagr(static_cast<Eigen::Index>(q), 0);
    out(cols[1]) += gw * lagr(static_cast<Eigen::Index>(q), k);
    for (int m = 1; m < k; ++m) out(cols[1 + m]) += gw * lagr(static_cast<Eigen::Index>(q), m);
  }
}

}  // namespace

AssembledSystem assemble_diffusion(const mesh::Mesh2D& mesh, const DiffusionData& data,
                                   std::span<const int> element_order) {
  const int k = data.order;
  const pcc::ReferenceElement ref(k);
  AssembledSystem out;
  out.fields.push_back(
      make_field(create_dof_table({ref.dofs_per_vertex, ref.dofs_per_edge, ref.dofs_per_cell}, mesh, data.bc), {}, 0));
  Field& field = out.fields[0];
  out.system = LinearSystem(field.table.num_dofs);
  const int nkm1 = poly_dim(2, k - 1);

  for (int c : element_sequence(mesh, element_order)) {
    const auto space = pcc::build_pcc_local_space(mesh.polygon(c), k);
    const auto& quad = space.internal_quadrature;
    const auto g = pcc::basis_function_derivative_values(space, pcc::ProjectionType::Pi0km1Der);
    const int n = space.num_dofs;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Matrix2d d = data.diffusion(quad.points[q]) * quad.weights[q];
      const auto iq = static_cast<Eigen::Index>(q);
      Eigen::MatrixXd gq(2, n);
      gq.row(0) = g[0].row(iq);
      gq.row(1) = g[1].row(iq);
      K += gq.transpose() * d * gq;
    }
    if (data.stabilization == pcc::Stabilization::dofi_dofi)
      K += spectral_norm(data.diffusion(space.polygon.centroid())) * pcc::stabilization_matrix(space, data.stabilization);
    else
      K += pcc::stabilization_matrix(space, data.stabilization, K.diagonal());

    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    const Eigen::MatrixXd psi = space.vander_k.leftCols(nkm1) * space.pi0_km1;
    for (std::size_t q = 0; q < quad.size(); ++q)
      load += data.source(quad.points[q]) * quad.weights[q] * psi.row(static_cast<Eigen::Index>(q)).transpose();
    const auto& cell = mesh.cell(c);
    for (int i = 0; i < static_cast<int>(cell.edges.size()); ++i)
      if (edge_is_weak(mesh, cell.edges[i], data.bc)) primal_edge_load(space, i, data.neumann, load);

    const auto slots = local_to_global(field.table, mesh, c, field.orientation);
    if (field.table.num_strong > 0) record_strong(field, slots, pcc::interpolate_function(space, data.dirichlet));
    scatter_matrix(out.system, field, slots, field, slots, K);
    scatter_vector(out.system, field, slots, load);
  }
  return out;
}

AssembledSystem assemble_elasticity(const mesh::Mesh2D& mesh, const ElasticityData& data,
                                    std::span<const int> element_order) {
  const int k = data.order;
  const pcc::ReferenceElement ref(k);
  const DofCounts counts{ref.dofs_per_vertex, ref.dofs_per_edge, ref.dofs_per_cell};
  AssembledSystem out;
  out.fields.push_back(make_field(create_dof_table(counts, mesh, data.bc), {}, 0));
  out.fields.push_back(make_field(create_dof_table(counts, mesh, data.bc), {}, out.fields[0].table.num_dofs));
  out.system = LinearSystem(out.fields[0].table.num_dofs + out.fields[1].table.num_dofs);
  const int nkm1 = poly_dim(2, k - 1);

  for (int c : element_sequence(mesh, element_order)) {
    const auto space = pcc::build_pcc_local_space(mesh.polygon(c), k);
    const auto& quad = space.internal_quadrature;
    const auto g = pcc::basis_function_derivative_values(space, pcc::ProjectionType::Pi0km1Der);
    Eigen::VectorXd wmu(quad.size()), wlambda(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
      wmu(static_cast<Eigen::Index>(q)) = data.mu(quad.points[q]) * quad.weights[q];
      wlambda(static_cast<Eigen::Index>(q)) = data.lambda(quad.points[q]) * quad.weights[q];
    }
    const Eigen::MatrixXd laplace = g[0].transpose() * wmu.asDiagonal() * g[0] + g[1].transpose() * wmu.asDiagonal() * g[1];
    std::array<std::array<Eigen::MatrixXd, 2>, 2> K;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        // test component a, trial component b
        K[a][b] = g[b].transpose() * wmu.asDiagonal() * g[a] + g[a].transpose() * wlambda.asDiagonal() * g[b];
        if (a == b) K[a][b] += laplace;
      }
    const double mu_c = data.mu(space.polygon.centroid());
    for (int a = 0; a < 2; ++a) {
      if (data.stabilization == pcc::Stabilization::dofi_dofi)
        K[a][a] += mu_c * pcc::stabilization_matrix(space, data.stabilization);
      else
        K[a][a] += pcc::stabilization_matrix(space, data.stabilization, K[a][a].diagonal());
    }

    const Eigen::MatrixXd psi = space.vander_k.leftCols(nkm1) * space.pi0_km1;
    std::array<Eigen::VectorXd, 2> load{Eigen::VectorXd::Zero(space.num_dofs), Eigen::VectorXd::Zero(space.num_dofs)};
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Vector2d f = data.source(quad.points[q]) * quad.weights[q];
      for (int a = 0; a < 2; ++a) load[a] += f(a) * psi.row(static_cast<Eigen::Index>(q)).transpose();
    }
    const auto& cell = mesh.cell(c);
    for (int i = 0; i < static_cast<int>(cell.edges.size()); ++i)
      if (edge_is_weak(mesh, cell.edges[i], data.bc))
        for (int a = 0; a < 2; ++a)
          primal_edge_load(space, i, [&](const Point& x, const Eigen::Vector2d& n) { return data.traction(x, n)(a); },
                           load[a]);

    std::array<std::vector<Slot>, 2> slots;
    for (int a = 0; a < 2; ++a) {
      auto& f = out.fields[a];
      slots[a] = local_to_global(f.table, mesh, c, f.orientation);
      if (f.table.num_strong > 0)
        record_strong(f, slots[a], pcc::interpolate_function(space, [&](const Point& x) { return data.dirichlet(x)(a); }));
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) scatter_matrix(out.system, out.fields[a], slots[a], out.fields[b], slots[b], K[a][b]);
      scatter_vector(out.system, out.fields[a], slots[a], load[a]);
    }
  }
  return out;
}

AssembledSystem assemble_mixed_darcy(const mesh::Mesh2D& mesh, const DarcyData& data,
                                     std::span<const int> element_order) {
  const int k = data.order;
  const mcc::ReferenceElement ref(k);
  const int nk = poly_dim(2, k);
  AssembledSystem out;
  out.fields.push_back(make_field(create_dof_table({0, ref.dofs_per_edge, ref.dofs_per_cell}, mesh, data.bc),
                                  {1, true}, 0));
  out.fields.push_back(make_field(create_dof_table({0, 0, nk}, mesh, {}), {}, out.fields[0].table.num_dofs));
  Field& velocity = out.fields[0];
  Field& pressure = out.fields[1];
  out.system = LinearSystem(velocity.table.num_dofs + pressure.table.num_dofs);

  const auto gauss = quadrature::gauss_segment(k + 1);
  const auto gauss_unit = to_unit_interval(gauss.points);
  const auto fine = to_unit_interval(quadrature::gauss_segment(k + 4).points);
  const Eigen::MatrixXd lagr = lagrange_values(gauss_unit, fine);

  for (int c : element_sequence(mesh, element_order)) {
    const auto space = mcc::build_mcc_local_space(mesh.polygon(c), k);
    const auto& quad = space.internal_quadrature;
    const auto psi = mcc::mcc_basis_values(space);
    const int n = space.num_dofs;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto iq = static_cast<Eigen::Index>(q);
      const Eigen::Matrix2d kinv = data.permeability(quad.points[q]).inverse() * quad.weights[q];
      Eigen::MatrixXd pq(2, n);
      pq.row(0) = psi[0].row(iq);
      pq.row(1) = psi[1].row(iq);
      A += pq.transpose() * kinv * pq;
    }
    A += spectral_norm(data.permeability(space.polygon.centroid()).inverse()) * mcc::mcc_stabilization(space);
    const Eigen::MatrixXd B = -space.div_moments;

    Eigen::VectorXd load_u = Eigen::VectorXd::Zero(n);
    const auto& cell = mesh.cell(c);
    for (int i = 0; i < static_cast<int>(cell.edges.size()); ++i) {
      if (!edge_is_weak(mesh, cell.edges[i], data.bc)) continue;
      const auto& edge = space.polygon.edge(i);
      const auto rule = quadrature::edge_rule(edge.origin, edge.end, k + 4);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double pw = data.pressure(rule.points[q]) * rule.weights[q];
        for (int j = 0; j <= k; ++j) load_u(i * (k + 1) + j) -= pw * lagr(static_cast<Eigen::Index>(q), j);
      }
    }
    Eigen::VectorXd load_p = Eigen::VectorXd::Zero(nk);
    for (std::size_t q = 0; q < quad.size(); ++q)
      load_p -= data.source(quad.points[q]) * quad.weights[q] * space.vander_k.row(static_cast<Eigen::Index>(q)).transpose();

    const auto us = local_to_global(velocity.table, mesh, c, velocity.orientation);
    const auto ps = local_to_global(pressure.table, mesh, c, pressure.orientation);
    if (velocity.table.num_strong > 0) record_strong(velocity, us, mcc::interpolate_velocity(space, data.flux));
    scatter_matrix(out.system, velocity, us, velocity, us, A);
    scatter_matrix(out.system, velocity, us, pressure, ps, B.transpose());
    scatter_matrix(out.system, pressure, ps, velocity, us, B);
    scatter_vector(out.system, velocity, us, load_u);
    scatter_vector(out.system, pressure, ps, load_p);
  }
  return out;
}

AssembledSystem assemble_stokes(const mesh::Mesh2D& mesh, const StokesData& data, std::span<const int> element_order) {
  const int k = data.order;
  for (const auto& [marker, cond] : data.bc)
    if (cond.kind == DofKind::weak)
      throw std::invalid_argument("Stokes assembly supports Dirichlet (strong) boundaries only");
  const df::ReferenceElement ref(k, data.reduced);
  const int np = ref.pressure_dofs();
  AssembledSystem out;
  out.fields.push_back(
      make_field(create_dof_table({ref.dofs_per_vertex, ref.dofs_per_edge, ref.dofs_per_cell()}, mesh, data.bc),
                 {2, false}, 0));
  out.fields.push_back(make_field(create_dof_table({0, 0, np}, mesh, {}), {}, out.fields[0].table.num_dofs));
  Field& velocity = out.fields[0];
  Field& pressure = out.fields[1];
  out.multiplier = velocity.table.num_dofs + pressure.table.num_dofs;
  out.system = LinearSystem(out.multiplier + 1);
  const int nk = poly_dim(2, k);
  const int nkm1 = poly_dim(2, k - 1);

  for (int c : element_sequence(mesh, element_order)) {
    const auto space = df::build_df_local_space(mesh.polygon(c), k);
    const auto& quad = space.internal_quadrature;
    const int n = space.num_dofs;
    Eigen::VectorXd wnu(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) wnu(static_cast<Eigen::Index>(q)) = data.viscosity(quad.points[q]) * quad.weights[q];
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    const auto v = space.vander_k.leftCols(nkm1);
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j) {
        const Eigen::MatrixXd g = v * space.pi0_km1_grad[a][j];
        A += g.transpose() * wnu.asDiagonal() * g;
      }
    A += data.viscosity(space.polygon.centroid()) * df::df_stabilization(space);
    Eigen::MatrixXd B = df::df_divergence_matrix(space);

    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    const Eigen::MatrixXd px = space.vander_k * space.pi0_k.topRows(nk);
    const Eigen::MatrixXd py = space.vander_k * space.pi0_k.bottomRows(nk);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const auto iq = static_cast<Eigen::Index>(q);
      const Eigen::Vector2d f = data.source(quad.points[q]) * quad.weights[q];
      load += f.x() * px.row(iq).transpose() + f.y() * py.row(iq).transpose();
    }
    Eigen::VectorXd mean_row = space.H.row(0).head(nkm1).transpose();  // \int m_a

    Eigen::VectorXd strong_local;
    const auto us = local_to_global(velocity.table, mesh, c, velocity.orientation);
    const bool need_strong = velocity.table.num_strong > 0;
    if (need_strong) strong_local = df::interpolate_velocity(space, data.dirichlet);
    if (data.reduced) {
      const auto map = df::reduce_df_space(space);
      A = map.transform.transpose() * A * map.transform;
      B = B.topRows(1) * map.transform;
      load = map.transform.transpose() * load;
      mean_row = mean_row.head(1).eval();
      if (need_strong) strong_local = map.transform.transpose() * strong_local;
    }
    const auto ps = local_to_global(pressure.table, mesh, c, pressure.orientation);
    if (need_strong) record_strong(velocity, us, strong_local);
    scatter_matrix(out.system, velocity, us, velocity, us, A);
    scatter_matrix(out.system, velocity, us, pressure, ps, B.transpose());
    scatter_matrix(out.system, pressure, ps, velocity, us, B);
    scatter_vector(out.system, velocity, us, load);
    for (std::size_t a = 0; a < ps.size(); ++a) {
      const int row = pressure.offset + ps[a].index;
      out.system.add(row, out.multiplier, mean_row(static_cast<Eigen::Index>(a)));
      out.system.add(out.multiplier, row, mean_row(static_cast<Eigen::Index>(a)));
    }
  }
  return out;
}

}  // namespace vemkit::pde
