#include "vemkit/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vemkit::harness {

using pde::BoundaryCondition;
using pde::DofKind;

Family parse_family(const std::string& name) {
  if (name == "pcc") return Family::pcc;
  if (name == "elasticity") return Family::elasticity;
  if (name == "mcc") return Family::mcc;
  if (name == "df_stokes") return Family::df_stokes;
  if (name == "df_stokes_reduced") return Family::df_stokes_reduced;
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::pcc: return "pcc";
    case Family::elasticity: return "elasticity";
    case Family::mcc: return "mcc";
    case Family::df_stokes: return "df_stokes";
    case Family::df_stokes_reduced: return "df_stokes_reduced";
  }
  return "?";
}

bool is_stokes(Family family) { return family == Family::df_stokes || family == Family::df_stokes_reduced; }

namespace {

constexpr double pi = std::numbers::pi;

pde::BoundaryConditionSpec uniform_bc(DofKind kind) {
  pde::BoundaryConditionSpec bc;
  for (int m = 1; m <= 4; ++m) bc[m] = {m, kind};
  return bc;
}

pde::BoundaryConditionSpec split_bc() {
  // bottom = 1, right = 2, top = 3, left = 4; corners take the smaller marker
  return {{1, {1, DofKind::strong}}, {2, {2, DofKind::strong}}, {3, {3, DofKind::weak}}, {4, {4, DofKind::weak}}};
}

Eigen::Matrix2d identity(const Point&) { return Eigen::Matrix2d::Identity(); }
double one(const Point&) { return 1.0; }

/// Global polynomial in unscaled monomials x^a y^b.
struct Poly {
  polybasis::MonomialBasis basis;
  Eigen::VectorXd c;

  Poly(int degree, Eigen::VectorXd coeffs) : basis(degree, Point::Zero(), 1.0), c(std::move(coeffs)) {}
  double operator()(const Point& x) const { return basis.values_at(x).dot(c); }
  Poly d(int axis) const { return {basis.order(), basis.derivative_matrix(axis) * c}; }
  Poly lap() const { return {basis.order(), (basis.derivative_matrix(0) * basis.derivative_matrix(0) +
                                            basis.derivative_matrix(1) * basis.derivative_matrix(1)) * c}; }
  Poly operator+(const Poly& o) const { return {basis.order(), c + o.c}; }
  Poly operator*(double s) const { return {basis.order(), s * c}; }
};

/// Every monomial up to `degree` with a distinct coefficient.
Poly sample_poly(int degree, int seed) {
  const int n = polybasis::poly_dim(2, degree);
  Eigen::VectorXd c(n);
  for (int a = 0; a < n; ++a) c(a) = ((a + seed) % 2 ? -1.0 : 1.0) / (1.0 + a + 0.5 * seed);
  return {degree, c};
}

}  // namespace

ManufacturedProblem default_problem(Family family) {
  ManufacturedProblem p;
  p.family = family;
  switch (family) {
    case Family::pcc:
      p.bc = uniform_bc(DofKind::strong);
      p.u = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
      p.grad_u = [](const Point& x) {
        return Eigen::Vector2d(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                               pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
      };
      p.scalar_source = [](const Point& x) { return 2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); };
      p.diffusion = identity;
      break;
    case Family::elasticity:
      p.bc = uniform_bc(DofKind::strong);
      p.v = [](const Point& x) {
        return Eigen::Vector2d(std::sin(pi * x.x()) * std::sin(pi * x.y()), std::cos(pi * x.x()) * std::cos(pi * x.y()));
      };
      p.grad_v = [](const Point& x) {
        const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
        const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
        Eigen::Matrix2d g;
        g << pi * cx * sy, pi * sx * cy, -pi * sx * cy, -pi * cx * sy;
        return g;
      };
      // div u = 0, so f = -mu Lap u = 2 pi^2 u
      p.vector_source = [v = p.v](const Point& x) -> Eigen::Vector2d { return 2 * pi * pi * v(x); };
      p.lambda = one;
      p.mu = one;
      break;
    case Family::mcc:
      p.bc = uniform_bc(DofKind::weak);
      p.p = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
      p.v = [](const Point& x) {
        return Eigen::Vector2d(-pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                               -pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
      };
      p.div_v = [](const Point& x) { return 2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); };
      p.scalar_source = p.div_v;
      p.diffusion = identity;
      break;
    case Family::df_stokes:
    case Family::df_stokes_reduced:
      // stream function cos x cos y vanishes on the boundary: zero normal flux
      p.domain = {{-pi / 2, -pi / 2}, {pi / 2, pi / 2}};
      p.bc = uniform_bc(DofKind::strong);
      p.v = [](const Point& x) {
        return Eigen::Vector2d(-std::cos(x.x()) * std::sin(x.y()), std::sin(x.x()) * std::cos(x.y()));
      };
      p.grad_v = [](const Point& x) {
        const double sx = std::sin(x.x()), cx = std::cos(x.x()), sy = std::sin(x.y()), cy = std::cos(x.y());
        Eigen::Matrix2d g;
        g << sx * sy, -cx * cy, cx * cy, -sx * sy;
        return g;
      };
      p.p = [](const Point& x) { return std::sin(x.x()); };
      // -Lap u - grad p = f
      p.vector_source = [v = p.v](const Point& x) -> Eigen::Vector2d {
        return 2.0 * v(x) - Eigen::Vector2d(std::cos(x.x()), 0.0);
      };
      p.viscosity = one;
      break;
  }
  return p;
}

ManufacturedProblem patch_problem(Family family, int k) {
  ManufacturedProblem p;
  p.family = family;
  p.bc = split_bc();
  switch (family) {
    case Family::pcc: {
      const Poly u = sample_poly(k, 0);
      p.u = u;
      p.grad_u = [ux = u.d(0), uy = u.d(1)](const Point& x) { return Eigen::Vector2d(ux(x), uy(x)); };
      p.scalar_source = u.lap() * -1.0;
      p.diffusion = identity;
      break;
    }
    case Family::elasticity: {
      const std::array<Poly, 2> v{sample_poly(k, 1), sample_poly(k, 2)};
      const Poly div = v[0].d(0) + v[1].d(1);
      p.v = [v](const Point& x) { return Eigen::Vector2d(v[0](x), v[1](x)); };
      p.grad_v = [v](const Point& x) {
        Eigen::Matrix2d g;
        for (int c = 0; c < 2; ++c)
          for (int j = 0; j < 2; ++j) g(c, j) = v[c].d(j)(x);
        return g;
      };
      // lambda = mu = 1: f = -(Lap v + 2 grad div v)
      p.vector_source = [v, div](const Point& x) {
        return Eigen::Vector2d(-(v[0].lap()(x) + 2.0 * div.d(0)(x)), -(v[1].lap()(x) + 2.0 * div.d(1)(x)));
      };
      p.lambda = one;
      p.mu = one;
      break;
    }
    case Family::mcc: {
      const Poly pressure = sample_poly(k + 1, 0);
      p.p = pressure;
      p.v = [px = pressure.d(0), py = pressure.d(1)](const Point& x) { return Eigen::Vector2d(-px(x), -py(x)); };
      p.div_v = pressure.lap() * -1.0;
      p.scalar_source = p.div_v;
      p.diffusion = identity;
      break;
    }
    case Family::df_stokes:
    case Family::df_stokes_reduced: {
      p.bc = uniform_bc(DofKind::strong);
      const Poly psi = sample_poly(k + 1, 0);
      const Poly ux = psi.d(1), uy = psi.d(0) * -1.0;
      Poly pressure = sample_poly(k - 1, 3);
      const auto& ex = pressure.basis.exponents();
      double mean = 0.0;
      for (std::size_t a = 0; a < ex.size(); ++a) mean += pressure.c(a) / ((ex[a][0] + 1.0) * (ex[a][1] + 1.0));
      pressure.c(0) -= mean;
      p.v = [ux, uy](const Point& x) { return Eigen::Vector2d(ux(x), uy(x)); };
      p.grad_v = [ux, uy](const Point& x) {
        Eigen::Matrix2d g;
        g << ux.d(0)(x), ux.d(1)(x), uy.d(0)(x), uy.d(1)(x);
        return g;
      };
      p.p = pressure;
      p.vector_source = [ux, uy, pressure](const Point& x) {
        return Eigen::Vector2d(-ux.lap()(x) - pressure.d(0)(x), -uy.lap()(x) - pressure.d(1)(x));
      };
      p.viscosity = one;
      break;
    }
  }
  return p;
}

Solution solve_problem(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k,
                       pcc::Stabilization stabilization, std::span<const int> element_order) {
  Solution out;
  switch (problem.family) {
    case Family::pcc: {
      pde::DiffusionData data{k, stabilization, problem.diffusion, problem.scalar_source, problem.u, {}, problem.bc};
      data.neumann = [d = problem.diffusion, g = problem.grad_u](const Point& x, const Eigen::Vector2d& n) {
        return (d(x) * g(x)).dot(n);
      };
      out.assembled = pde::assemble_diffusion(mesh, data, element_order);
      break;
    }
    case Family::elasticity: {
      pde::ElasticityData data{k, stabilization, problem.lambda, problem.mu, problem.vector_source, problem.v, {},
                               problem.bc};
      data.traction = [&problem](const Point& x, const Eigen::Vector2d& n) -> Eigen::Vector2d {
        const Eigen::Matrix2d g = problem.grad_v(x);
        const Eigen::Matrix2d sigma =
            problem.mu(x) * (g + g.transpose()) + problem.lambda(x) * g.trace() * Eigen::Matrix2d::Identity();
        return sigma * n;
      };
      out.assembled = pde::assemble_elasticity(mesh, data, element_order);
      break;
    }
    case Family::mcc: {
      pde::DarcyData data{k, problem.diffusion, problem.scalar_source, problem.p, problem.v, problem.bc};
      out.assembled = pde::assemble_mixed_darcy(mesh, data, element_order);
      break;
    }
    case Family::df_stokes:
    case Family::df_stokes_reduced: {
      pde::StokesData data{k, problem.family == Family::df_stokes_reduced, problem.viscosity, problem.vector_source,
                           problem.v, problem.bc};
      out.assembled = pde::assemble_stokes(mesh, data, element_order);
      break;
    }
  }
  out.result = pde::solve(out.assembled.system);
  return out;
}

}  // namespace vemkit::harness
