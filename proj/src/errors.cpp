#include "vemkit/errors.hpp"

#include <cmath>
#include <memory>

#include "vemkit/mcc2d.hpp"
#include "vemkit/pcc2d.hpp"

namespace vemkit::harness {

using polybasis::poly_dim;

namespace {

int error_order(int k) { return 2 * k + 6; }

/// \int (p - p_h)^2 and the squared distance between p_h and the L2
/// projection of p, both on P_n with coefficients `coeffs`.
std::pair<double, double> pressure_errors(const polybasis::MonomialBasis& basis,
                                          const Eigen::VectorXd& coeffs, const pde::ScalarField& p,
                                          const quadrature::QuadratureRule& rule) {
  const Eigen::MatrixXd v = basis.values(rule.points);
  const Eigen::VectorXd w = rule.weight_vector();
  Eigen::VectorXd exact(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) exact(static_cast<Eigen::Index>(q)) = p(rule.points[q]);
  const Eigen::VectorXd diff = exact - v * coeffs;
  const Eigen::MatrixXd H = v.transpose() * w.asDiagonal() * v;
  const Eigen::VectorXd projected = H.ldlt().solve(v.transpose() * w.asDiagonal() * exact);
  const Eigen::VectorXd d = projected - coeffs;
  return {diff.dot(w.asDiagonal() * diff), d.dot(H * d)};
}

Eigen::VectorXd reduced_pressure_coeffs(const Eigen::VectorXd& local, int n) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c.head(local.size()) = local;
  return c;
}

}  // namespace

Eigen::VectorXd stokes_local_velocity(const mesh::Mesh2D& mesh, const Solution& solution, const df::LocalSpaceData& space,
                                      int cell, bool reduced) {
  const Eigen::VectorXd local = pde::gather(solution.assembled.fields[0], mesh, cell, solution.result.x);
  if (!reduced) return local;
  return df::reduce_df_space(space).transform * local;
}

ErrorNorms compute_errors(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k, const Solution& solution) {
  ErrorNorms out;
  const auto& x = solution.result.x;
  const auto& fields = solution.assembled.fields;
  double l2 = 0.0, h1 = 0.0, ep = 0.0, epi = 0.0, div_max = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto polygon = mesh.polygon(c);
    const auto rule = quadrature::polygon_rule(polygon, error_order(k));
    switch (problem.family) {
      case Family::pcc:
      case Family::elasticity: {
        const auto space = pcc::build_pcc_local_space(polygon, k);
        const Eigen::MatrixXd vk = space.basis.values(rule.points);
        const Eigen::MatrixXd vkm1 = vk.leftCols(poly_dim(2, k - 1));
        const int components = problem.family == Family::pcc ? 1 : 2;
        for (int a = 0; a < components; ++a) {
          const Eigen::VectorXd u = pde::gather(fields[a], mesh, c, x);
          const Eigen::VectorXd val = vk * (space.pi0_k * u);
          const Eigen::VectorXd gx = vkm1 * (space.pi0_km1_grad[0] * u);
          const Eigen::VectorXd gy = vkm1 * (space.pi0_km1_grad[1] * u);
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto iq = static_cast<Eigen::Index>(q);
            const Point& pt = rule.points[q];
            double exact;
            Eigen::Vector2d grad;
            if (components == 1) {
              exact = problem.u(pt);
              grad = problem.grad_u(pt);
            } else {
              exact = problem.v(pt)(a);
              grad = problem.grad_v(pt).row(a).transpose();
            }
            l2 += rule.weights[q] * std::pow(exact - val(iq), 2);
            h1 += rule.weights[q] * ((grad - Eigen::Vector2d(gx(iq), gy(iq))).squaredNorm());
          }
        }
        break;
      }
      case Family::mcc: {
        const auto space = mcc::build_mcc_local_space(polygon, k);
        const int nk = space.basis.size();
        const Eigen::VectorXd u = pde::gather(fields[0], mesh, c, x);
        const Eigen::VectorXd ph = pde::gather(fields[1], mesh, c, x);
        const Eigen::MatrixXd vk = space.basis.values(rule.points);
        const Eigen::VectorXd coeffs = space.pi0_k * u;
        const Eigen::VectorXd ux = vk * coeffs.head(nk), uy = vk * coeffs.tail(nk);
        const Eigen::VectorXd div = vk * (space.div * u);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const auto iq = static_cast<Eigen::Index>(q);
          const Point& pt = rule.points[q];
          l2 += rule.weights[q] * (problem.v(pt) - Eigen::Vector2d(ux(iq), uy(iq))).squaredNorm();
          h1 += rule.weights[q] * std::pow(problem.div_v(pt) - div(iq), 2);
        }
        const auto [a, b] = pressure_errors(space.basis, ph, problem.p, rule);
        ep += a;
        epi += b;
        break;
      }
      case Family::df_stokes:
      case Family::df_stokes_reduced: {
        const bool reduced = problem.family == Family::df_stokes_reduced;
        const auto space = df::build_df_local_space(polygon, k);
        const int nk = space.basis.size();
        const int nkm1 = poly_dim(2, k - 1);
        const Eigen::VectorXd u = stokes_local_velocity(mesh, solution, space, c, reduced);
        const Eigen::VectorXd ph = pde::gather(fields[1], mesh, c, x);
        const Eigen::MatrixXd vk = space.basis.values(rule.points);
        const Eigen::MatrixXd vkm1 = vk.leftCols(nkm1);
        const Eigen::VectorXd coeffs = space.pi0_k * u;
        const Eigen::VectorXd ux = vk * coeffs.head(nk), uy = vk * coeffs.tail(nk);
        std::array<std::array<Eigen::VectorXd, 2>, 2> g;
        for (int a = 0; a < 2; ++a)
          for (int j = 0; j < 2; ++j) g[a][j] = vkm1 * (space.pi0_km1_grad[a][j] * u);
        const Eigen::VectorXd div_coeffs = space.div * u;
        const Eigen::VectorXd div = vkm1 * div_coeffs;
        const Eigen::VectorXd div_internal = space.vander_k.leftCols(nkm1) * div_coeffs;
        div_max = std::max({div_max, div.cwiseAbs().maxCoeff(), div_internal.cwiseAbs().maxCoeff()});
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const auto iq = static_cast<Eigen::Index>(q);
          const Point& pt = rule.points[q];
          const Eigen::Matrix2d grad = problem.grad_v(pt);
          l2 += rule.weights[q] * (problem.v(pt) - Eigen::Vector2d(ux(iq), uy(iq))).squaredNorm();
          for (int a = 0; a < 2; ++a)
            for (int j = 0; j < 2; ++j) h1 += rule.weights[q] * std::pow(grad(a, j) - g[a][j](iq), 2);
        }
        const auto pbasis = space.basis.with_order(reduced ? 0 : k - 1);
        const auto [a, b] = pressure_errors(pbasis, reduced_pressure_coeffs(ph, pbasis.size()), problem.p, rule);
        ep += a;
        epi += b;
        break;
      }
    }
  }
  out.l2 = std::sqrt(l2);
  out.h1 = std::sqrt(h1);
  if (problem.family == Family::mcc || is_stokes(problem.family)) {
    out.p = std::sqrt(ep);
    out.pi_p = std::sqrt(epi);
  }
  if (is_stokes(problem.family)) out.div_max = div_max;
  return out;
}

std::vector<vtk::PointField> projected_fields(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k,
                                             const Solution& solution) {
  // per cell: basis and coefficient blocks, evaluated lazily by the writer
  struct CellData {
    polybasis::MonomialBasis basis;
    Eigen::VectorXd primary;   // scalar or blocked vector coefficients (order k)
    Eigen::VectorXd pressure;  // coefficients in the leading monomials
  };
  auto cells = std::make_shared<std::vector<CellData>>();
  const auto& x = solution.result.x;
  const auto& fields = solution.assembled.fields;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto polygon = mesh.polygon(c);
    switch (problem.family) {
      case Family::pcc: {
        const auto s = pcc::build_pcc_local_space(polygon, k);
        cells->push_back({s.basis, s.pi0_k * pde::gather(fields[0], mesh, c, x), {}});
        break;
      }
      case Family::elasticity: {
        const auto s = pcc::build_pcc_local_space(polygon, k);
        Eigen::VectorXd coeffs(2 * s.basis.size());
        coeffs << s.pi0_k * pde::gather(fields[0], mesh, c, x), s.pi0_k * pde::gather(fields[1], mesh, c, x);
        cells->push_back({s.basis, coeffs, {}});
        break;
      }
      case Family::mcc: {
        const auto s = mcc::build_mcc_local_space(polygon, k);
        cells->push_back({s.basis, s.pi0_k * pde::gather(fields[0], mesh, c, x), pde::gather(fields[1], mesh, c, x)});
        break;
      }
      case Family::df_stokes:
      case Family::df_stokes_reduced: {
        const auto s = df::build_df_local_space(polygon, k);
        const Eigen::VectorXd u = stokes_local_velocity(mesh, solution, s, c, problem.family == Family::df_stokes_reduced);
        cells->push_back({s.basis, s.pi0_k * u, pde::gather(fields[1], mesh, c, x)});
        break;
      }
    }
  }
  std::vector<vtk::PointField> out;
  if (problem.family == Family::pcc) {
    out.push_back({"u", 1, [cells](int c, const Point& p) {
                     const auto& d = (*cells)[c];
                     return Eigen::VectorXd::Constant(1, d.basis.values_at(p).dot(d.primary));
                   }});
    return out;
  }
  const std::string name = problem.family == Family::elasticity ? "displacement" : "velocity";
  out.push_back({name, 2, [cells](int c, const Point& p) {
                   const auto& d = (*cells)[c];
                   const Eigen::RowVectorXd m = d.basis.values_at(p);
                   const auto n = m.size();
                   return Eigen::VectorXd(Eigen::Vector2d(m.dot(d.primary.head(n)), m.dot(d.primary.tail(n))));
                 }});
  if (problem.family != Family::elasticity)
    out.push_back({"pressure", 1, [cells](int c, const Point& p) {
                     const auto& d = (*cells)[c];
                     const Eigen::RowVectorXd m = d.basis.values_at(p);
                     return Eigen::VectorXd::Constant(1, m.head(d.pressure.size()).dot(d.pressure));
                   }});
  return out;
}

}  // namespace vemkit::harness
