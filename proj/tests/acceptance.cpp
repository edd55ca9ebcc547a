// End-to-end checks: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "vemkit/df2d.hpp"
#include "vemkit/mcc2d.hpp"
#include "vemkit/study.hpp"

using namespace vemkit;
using harness::Family;
using mesh::StructuredType;
using pcc::Stabilization;

namespace {

// residual bookkeeping shared by every solve in this binary
struct SolveLog {
  int solves = 0;
  int violations = 0;
  void record(double residual, double bound) {
    ++solves;
    if (!(residual <= bound)) ++violations;
  }
} solve_log;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

const char* type_name(StructuredType t) {
  switch (t) {
    case StructuredType::quads: return "quads";
    case StructuredType::triangles: return "triangles";
    case StructuredType::hanging_quads: return "hanging_quads";
  }
  return "?";
}

const char* recipe_name(Stabilization s) { return s == Stabilization::dofi_dofi ? "dofi_dofi" : "d_recipe"; }

mesh::Mesh2D marked(const mesh::Rectangle& r, StructuredType type, int n) {
  return mesh::assign_boundary_markers(mesh::generate_structured(r, type, n), r);
}

harness::ConvergenceRecord study(Family family, int k, StructuredType type, int refinements, Stabilization stab) {
  harness::StudyConfig c;
  c.family = family;
  c.order = k;
  c.mesh = type_name(type);
  c.refinements = refinements;
  c.stabilization = stab;
  auto r = harness::run_convergence_study(c);
  for (const auto& row : r.rows) solve_log.record(row.residual, row.residual_bound);
  return r;
}

double slope(const harness::ConvergenceRecord& r, double harness::ErrorNorms::*field) {
  std::vector<double> h, e;
  for (const auto& row : r.rows) {
    h.push_back(row.h);
    e.push_back(row.errors.*field);
  }
  return harness::least_squares_slope(h, e);
}

harness::Solution solve(const mesh::Mesh2D& m, const harness::ManufacturedProblem& p, int k, Stabilization stab,
                        std::span<const int> order = {}) {
  auto s = harness::solve_problem(m, p, k, stab, order);
  solve_log.record(s.result.residual, s.result.bound);
  return s;
}

struct PccRates {
  double l2 = 0.0, h1 = 0.0;
};

// (k, mesh type, recipe) -> slopes, shared by criteria 1 and 7
std::map<std::tuple<int, StructuredType, Stabilization>, PccRates> pcc_rates;

Outcome pcc_convergence(Stabilization stab) {
  Outcome out;
  for (auto type : {StructuredType::quads, StructuredType::hanging_quads})
    for (int k = 1; k <= 3; ++k) {
      const auto start = std::chrono::steady_clock::now();
      const auto r = study(Family::pcc, k, type, 4, stab);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const PccRates s{slope(r, &harness::ErrorNorms::l2), slope(r, &harness::ErrorNorms::h1)};
      pcc_rates[{k, type, stab}] = s;
      std::printf("  pcc k=%d %-13s %-9s slope L2 %.3f (>= %.1f)  H1 %.3f (>= %.1f)  %.1fs\n", k, type_name(type),
                  recipe_name(stab), s.l2, k + 0.8, s.h1, k - 0.2, secs);
      out.require(s.l2 >= k + 1 - 0.2, "k=" + std::to_string(k) + " " + type_name(type) + " L2 slope " + fmt(s.l2));
      out.require(s.h1 >= k - 0.2, "k=" + std::to_string(k) + " " + type_name(type) + " H1 slope " + fmt(s.h1));
    }
  return out;
}

// relative errors against the exact solution norms on the mesh
struct Norms {
  double l2 = 0.0, h1 = 0.0, p = 0.0, div = 0.0;
};

Norms exact_norms(const mesh::Mesh2D& m, const harness::ManufacturedProblem& p) {
  Norms n;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto rule = quadrature::polygon_rule(m.polygon(c), 12);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      const double w = rule.weights[q];
      if (p.u) {
        n.l2 += w * p.u(x) * p.u(x);
        n.h1 += w * p.grad_u(x).squaredNorm();
      }
      if (p.v) n.l2 += w * p.v(x).squaredNorm();
      if (p.grad_v) n.h1 += w * p.grad_v(x).squaredNorm();
      if (p.div_v) n.div += w * p.div_v(x) * p.div_v(x);
      if (p.p) n.p += w * p.p(x) * p.p(x);
    }
  }
  n.l2 = std::sqrt(n.l2);
  n.h1 = std::sqrt(n.h1);
  n.p = std::sqrt(n.p);
  n.div = std::sqrt(n.div);
  return n;
}

Outcome patch_tests(Stabilization stab) {
  Outcome out;
  const auto m = marked({}, StructuredType::hanging_quads, 3);
  double worst = 0.0;
  for (auto family : {Family::pcc, Family::elasticity, Family::mcc, Family::df_stokes, Family::df_stokes_reduced}) {
    const int lo = family == Family::mcc ? 0 : (harness::is_stokes(family) ? 2 : 1);
    for (int k = lo; k <= 3; ++k) {
      const auto problem = harness::patch_problem(family, k);
      const auto sol = solve(m, problem, k, stab);
      const auto e = harness::compute_errors(m, problem, k, sol);
      const auto n = exact_norms(m, problem);
      std::vector<double> rel{e.l2 / n.l2};
      // mcc: err_h1 is the divergence error
      if (family == Family::mcc)
        rel.push_back(n.div > 0 ? e.h1 / n.div : e.h1);
      else
        rel.push_back(e.h1 / n.h1);
      // the mcc pressure has degree k + 1 and is recovered through its projection
      if (family == Family::mcc || family == Family::df_stokes_reduced) rel.push_back(e.pi_p / n.p);
      if (family == Family::df_stokes) rel.push_back(e.p / n.p);
      const double r = *std::max_element(rel.begin(), rel.end());
      worst = std::max(worst, r);
      out.require(r <= 1e-8, harness::family_name(family) + " k=" + std::to_string(k) + " rel " + fmt(r));
    }
  }
  std::printf("  patch tests (%s): worst relative error %.2e (<= 1e-8)\n", recipe_name(stab), worst);
  return out;
}

Outcome mixed_superconvergence() {
  Outcome out;
  for (auto type : {StructuredType::quads, StructuredType::hanging_quads})
    for (int k = 0; k <= 1; ++k) {
      const auto r = study(Family::mcc, k, type, 4, Stabilization::dofi_dofi);
      const double su = slope(r, &harness::ErrorNorms::l2);
      const double sp = slope(r, &harness::ErrorNorms::p);
      const double spi = slope(r, &harness::ErrorNorms::pi_p);
      std::printf("  mcc k=%d %-13s slope u %.3f  p %.3f (>= %.1f)  p_I - p_h %.3f (>= %.1f)\n", k, type_name(type), su,
                  sp, k + 0.8, spi, k + 1.8);
      const std::string tag = "k=" + std::to_string(k) + " " + type_name(type);
      out.require(su >= k + 1 - 0.2, tag + " velocity slope " + fmt(su));
      out.require(sp >= k + 1 - 0.2, tag + " pressure slope " + fmt(sp));
      out.require(spi >= k + 2 - 0.2, tag + " superconvergent slope " + fmt(spi));
    }
  return out;
}

Outcome divergence_free() {
  Outcome out;
  for (auto family : {Family::df_stokes, Family::df_stokes_reduced})
    for (int k = 2; k <= 3; ++k)
      for (auto type : {StructuredType::quads, StructuredType::triangles, StructuredType::hanging_quads}) {
        // n = 4, 8, 16
        harness::ConvergenceRecord r;
        try {
          r = study(family, k, type, 3, Stabilization::dofi_dofi);
        } catch (const pde::SolverError& e) {
          out.require(false, harness::family_name(family) + ": " + e.what());
          continue;
        }
        double worst = 0.0;
        for (const auto& row : r.rows) worst = std::max(worst, row.errors.div_max);
        std::printf("  %-17s k=%d %-13s max|div u_h| %.2e  slopes u %.2f  grad u %.2f  p %.2f\n",
                    harness::family_name(family).c_str(), k, type_name(type), worst, slope(r, &harness::ErrorNorms::l2),
                    slope(r, &harness::ErrorNorms::h1), slope(r, &harness::ErrorNorms::p));
        out.require(worst <= 1e-9, harness::family_name(family) + " k=" + std::to_string(k) + " " + type_name(type) +
                                       " div " + fmt(worst));
      }
  return out;
}

Outcome reduced_equivalence() {
  Outcome out;
  const int k = 2;
  auto full_problem = harness::default_problem(Family::df_stokes);
  auto reduced_problem = harness::default_problem(Family::df_stokes_reduced);
  const auto m = marked(full_problem.domain, StructuredType::quads, 4);
  const auto full = solve(m, full_problem, k, Stabilization::dofi_dofi);
  const auto reduced = solve(m, reduced_problem, k, Stabilization::dofi_dofi);

  double du = 0.0, dp = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto polygon = m.polygon(c);
    const auto space = df::build_df_local_space(polygon, k);
    const Eigen::VectorXd uf = harness::stokes_local_velocity(m, full, space, c, false);
    const Eigen::VectorXd ur = harness::stokes_local_velocity(m, reduced, space, c, true);
    du = std::max(du, (uf - ur).lpNorm<Eigen::Infinity>());
    // cell mean of p_h against the single reduced pressure value
    const Eigen::VectorXd pf = pde::gather(full.assembled.fields[1], m, c, full.result.x);
    const Eigen::VectorXd pr = pde::gather(reduced.assembled.fields[1], m, c, reduced.result.x);
    const auto rule = quadrature::polygon_rule(polygon, 2 * k);
    const auto basis = space.basis.with_order(k - 1);
    const double mean = (basis.values(rule.points) * pf).dot(rule.weight_vector()) / polygon.area();
    dp = std::max(dp, std::abs(mean - pr(0)));
  }
  const int cells = m.num_cells();
  const int per_cell = polybasis::poly_dim(2, k - 1) - 1;
  const int dv = full.assembled.fields[0].table.num_dofs - reduced.assembled.fields[0].table.num_dofs;
  const int dq = full.assembled.fields[1].table.num_dofs - reduced.assembled.fields[1].table.num_dofs;
  std::printf("  4x4 quads k=2: max|u_full - u_reduced| %.2e  max|mean(p_h) - p_hat| %.2e\n", du, dp);
  std::printf("  velocity unknowns %d -> %d (diff %d, expected %d)  pressure unknowns %d -> %d (diff %d, expected %d)\n",
              full.assembled.fields[0].table.num_dofs, reduced.assembled.fields[0].table.num_dofs, dv, per_cell * cells,
              full.assembled.fields[1].table.num_dofs, reduced.assembled.fields[1].table.num_dofs, dq, per_cell * cells);
  out.require(du <= 1e-9, "velocity difference " + fmt(du));
  out.require(dp <= 1e-9, "pressure mean difference " + fmt(dp));
  out.require(dv == per_cell * cells, "velocity unknown difference " + std::to_string(dv));
  out.require(dq == per_cell * cells, "pressure unknown difference " + std::to_string(dq));
  return out;
}

std::vector<geometry::Polygon2D> random_polygons(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> sides(3, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<geometry::Polygon2D> out;
  for (int i = 0; i < count; ++i) {
    const int n = sides(rng);
    const double scale = 0.05 + 2.0 * unit(rng);
    const Point center(unit(rng) * 4 - 2, unit(rng) * 4 - 2);
    std::vector<Point> v;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * M_PI * (j + 0.35 * (unit(rng) - 0.5)) / n;
      const double r = i % 3 == 0 ? 1.0 : 0.55 + 0.45 * unit(rng);
      v.push_back(center + scale * r * Point(std::cos(t), std::sin(t)));
    }
    out.emplace_back(v);
  }
  return out;
}

Eigen::VectorXd coefficients(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = u(rng);
  return c;
}

std::function<Eigen::Vector2d(const Point&)> vector_poly(const polybasis::MonomialBasis& b, const Eigen::VectorXd& c) {
  const int n = b.size();
  return [b, c, n](const Point& x) {
    const Eigen::RowVectorXd m = b.values_at(x);
    return Eigen::Vector2d(m.dot(c.head(n)), m.dot(c.tail(n)));
  };
}

double annihilation(const Eigen::MatrixXd& S, const Eigen::MatrixXd& D) {
  const double scale = S.norm() * D.norm();
  return scale > 0.0 ? (S * D).norm() / scale : 0.0;
}

Outcome algebraic_invariants() {
  Outcome out;
  const auto polygons = random_polygons(100, 20240611);
  double orth = 0.0, ident = 0.0, annih = 0.0, repro = 0.0;
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    const auto& poly = polygons[i];
    for (int k = 0; k <= 4; ++k) {
      const polybasis::MonomialBasis basis(k, poly.centroid(), poly.diameter());
      const auto g = polybasis::build_grad_decomposition(basis);
      if (g.t_perp.rows() > 0) {
        orth = std::max(orth, (g.t_nabla * g.t_perp.transpose()).cwiseAbs().maxCoeff());
        ident = std::max(ident, (g.t_perp * g.t_perp.transpose() -
                                 Eigen::MatrixXd::Identity(g.t_perp.rows(), g.t_perp.rows()))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
    for (int k = 1; k <= 4; ++k) {
      const auto s = pcc::build_pcc_local_space(poly, k);
      const Eigen::MatrixXd K = pcc::consistency_matrix(s);
      if (s.num_dofs > s.basis.size()) {
        annih = std::max(annih, annihilation(pcc::stabilization_matrix(s, Stabilization::dofi_dofi), s.D));
        annih = std::max(annih, annihilation(pcc::stabilization_matrix(s, Stabilization::d_recipe, K.diagonal()), s.D));
      }
      const Eigen::VectorXd c = coefficients(s.basis.size(), 100 * k + i);
      const Eigen::VectorXd dofs =
          pcc::interpolate_function(s, [&](const Point& x) { return s.basis.values_at(x).dot(c); });
      repro = std::max({repro, (s.pi_nabla * dofs - c).norm() / c.norm(), (s.pi0_k * dofs - c).norm() / c.norm()});
    }
    for (int k = 0; k <= 4; ++k) {
      const auto s = mcc::build_mcc_local_space(poly, k);
      annih = std::max(annih, annihilation(mcc::mcc_stabilization(s), s.D));
      const Eigen::VectorXd c = coefficients(2 * s.basis.size(), 200 * k + i);
      const Eigen::VectorXd dofs = mcc::interpolate_velocity(s, vector_poly(s.basis, c));
      repro = std::max(repro, (s.pi0_k * dofs - c).norm() / c.norm());
    }
    for (int k = 2; k <= 4; ++k) {
      const auto s = df::build_df_local_space(poly, k);
      annih = std::max(annih, annihilation(df::df_stabilization(s), s.D));
      const Eigen::VectorXd c = coefficients(2 * s.basis.size(), 300 * k + i);
      const Eigen::VectorXd dofs = df::interpolate_velocity(s, vector_poly(s.basis, c));
      repro = std::max({repro, (s.pi_nabla * dofs - c).norm() / c.norm(), (s.pi0_k * dofs - c).norm() / c.norm()});
    }
  }
  std::printf("  100 random polygons, k <= 4: |T_grad T_perp^T| %.1e  |T_perp T_perp^T - I| %.1e\n", orth, ident);
  std::printf("  stabilization |S D| / (|S| |D|) %.1e  projector reproduction %.1e\n", annih, repro);
  out.require(orth <= 1e-12, "T orthogonality " + fmt(orth));
  out.require(ident <= 1e-12, "T_perp orthonormality " + fmt(ident));
  out.require(annih <= 1e-11, "stabilization annihilation " + fmt(annih));
  out.require(repro <= 1e-10, "reproduction " + fmt(repro));
  return out;
}

Outcome recipe_robustness(const Outcome& c1_dofi, const Outcome& c1_d, const Outcome& c2_dofi, const Outcome& c2_d) {
  Outcome out;
  out.require(c1_dofi.pass && c1_d.pass, "convergence fails for a recipe");
  out.require(c2_dofi.pass && c2_d.pass, "patch tests fail for a recipe");
  double worst = 0.0;
  for (auto type : {StructuredType::quads, StructuredType::hanging_quads})
    for (int k = 1; k <= 3; ++k) {
      const auto a = pcc_rates[{k, type, Stabilization::dofi_dofi}];
      const auto b = pcc_rates[{k, type, Stabilization::d_recipe}];
      worst = std::max({worst, std::abs(a.l2 - b.l2), std::abs(a.h1 - b.h1)});
    }
  // elasticity carries the recipe too
  for (int k = 1; k <= 2; ++k) {
    const auto a = study(Family::elasticity, k, StructuredType::hanging_quads, 3, Stabilization::dofi_dofi);
    const auto b = study(Family::elasticity, k, StructuredType::hanging_quads, 3, Stabilization::d_recipe);
    const double dl2 = std::abs(slope(a, &harness::ErrorNorms::l2) - slope(b, &harness::ErrorNorms::l2));
    const double dh1 = std::abs(slope(a, &harness::ErrorNorms::h1) - slope(b, &harness::ErrorNorms::h1));
    std::printf("  elasticity k=%d hanging_quads: slope differences L2 %.3f  H1 %.3f\n", k, dl2, dh1);
    worst = std::max({worst, dl2, dh1});
  }
  std::printf("  largest slope difference between recipes %.3f (<= 0.2)\n", worst);
  out.require(worst <= 0.2, "slope difference " + fmt(worst));
  return out;
}

Outcome infrastructure() {
  Outcome out;
  // mesh round trip
  bool exact = true;
  const mesh::Rectangle odd{{-0.3, 1.0 / 7}, {std::sqrt(2.0), M_PI}};
  for (auto type : {StructuredType::quads, StructuredType::triangles, StructuredType::hanging_quads}) {
    const auto m = marked(odd, type, 7);
    std::stringstream s;
    mesh::write_mesh(s, m);
    const auto back = mesh::read_mesh(s);
    exact = exact && back == m;
  }
  std::printf("  mesh round trip bit-exact: %s\n", exact ? "yes" : "no");
  out.require(exact, "mesh round trip differs");

  // element-order independence
  double worst = 0.0;
  std::mt19937 rng(7);
  for (auto family : {Family::pcc, Family::elasticity, Family::mcc, Family::df_stokes, Family::df_stokes_reduced}) {
    const int k = harness::is_stokes(family) ? 2 : 1;
    const auto problem = harness::default_problem(family);
    const auto m = marked(problem.domain, StructuredType::hanging_quads, 6);
    std::vector<int> order(m.num_cells());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto a = solve(m, problem, k, Stabilization::dofi_dofi);
    const auto b = solve(m, problem, k, Stabilization::dofi_dofi, order);
    const double d =
        (a.result.x - b.result.x).lpNorm<Eigen::Infinity>() / std::max(1.0, a.result.x.lpNorm<Eigen::Infinity>());
    worst = std::max(worst, d);
  }
  std::printf("  element-order independence: max difference %.1e (<= 1e-12)\n", worst);
  out.require(worst <= 1e-12, "element order difference " + fmt(worst));

  std::printf("  solver residual bound: %d solves, %d violations\n", solve_log.solves, solve_log.violations);
  out.require(solve_log.violations == 0, std::to_string(solve_log.violations) + " residual violations");
  return out;
}

bool report(int id, const char* title, const Outcome& o) {
  std::printf("%s criterion %d: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

template <class F>
Outcome guarded(F f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main() {
  bool ok = true;

  const auto c1_dofi = guarded([] { return pcc_convergence(Stabilization::dofi_dofi); });
  const auto c1_d = guarded([] { return pcc_convergence(Stabilization::d_recipe); });
  Outcome c1 = c1_dofi;
  if (!c1_d.pass) c1.require(false, "d_recipe: " + c1_d.detail);
  ok &= report(1, "PCC convergence rates, k = 1..3, quads and hanging quads", c1);

  const auto c2_dofi = guarded([] { return patch_tests(Stabilization::dofi_dofi); });
  const auto c2_d = guarded([] { return patch_tests(Stabilization::d_recipe); });
  Outcome c2 = c2_dofi;
  if (!c2_d.pass) c2.require(false, "d_recipe: " + c2_d.detail);
  ok &= report(2, "patch tests, every family, k <= 3, 3x3 hanging-node mesh", c2);

  ok &= report(3, "mixed pressure superconvergence, k = 0, 1", guarded(mixed_superconvergence));
  ok &= report(4, "pointwise divergence-free Stokes velocity", guarded(divergence_free));
  ok &= report(5, "full and reduced Stokes agree", guarded(reduced_equivalence));
  ok &= report(6, "algebraic invariants on random polygons", guarded(algebraic_invariants));
  ok &= report(7, "stabilization recipe robustness",
               guarded([&] { return recipe_robustness(c1_dofi, c1_d, c2_dofi, c2_d); }));
  ok &= report(8, "mesh round trip, element-order independence, residual bound", guarded(infrastructure));
  return ok ? 0 : 1;
}
