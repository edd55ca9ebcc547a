#include "vemkit/study.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace vemkit::harness {

std::vector<mesh::Mesh2D> study_meshes(const StudyConfig& config, const mesh::Rectangle& domain) {
  std::vector<mesh::Mesh2D> out;
  if (config.mesh.rfind("file:", 0) == 0) {
    out.push_back(mesh::read_mesh(std::filesystem::path(config.mesh.substr(5))));
    return out;
  }
  const auto type = mesh::parse_structured_type(config.mesh);
  for (int i = 0; i < config.refinements; ++i)
    out.push_back(mesh::assign_boundary_markers(mesh::generate_structured(domain, type, config.base_cells << i), domain));
  return out;
}

ConvergenceRecord run_convergence_study(const StudyConfig& config) {
  if (config.order < 0) throw std::invalid_argument("order must be non-negative");
  if (config.refinements < 1) throw std::invalid_argument("refinements must be positive");
  const auto problem = default_problem(config.family);
  const auto meshes = study_meshes(config, problem.domain);
  ConvergenceRecord record{config.family, {}};
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const auto& m = meshes[i];
    Solution solution;
    try {
      solution = solve_problem(m, problem, config.order, config.stabilization);
    } catch (const pde::SolverError& e) {
      throw pde::SolverError("solve failed at h = " + std::to_string(m.mesh_size()) + ": " + e.what());
    }
    record.rows.push_back({m.mesh_size(), solution.assembled.system.dimension,
                           compute_errors(m, problem, config.order, solution), solution.result.residual,
                           solution.result.bound});
    if (is_stokes(config.family) && !(record.rows.back().errors.div_max <= 1e-9))
      throw pde::SolverError("max |div u_h| = " + std::to_string(record.rows.back().errors.div_max) +
                             " exceeds 1e-9 at h = " + std::to_string(m.mesh_size()));
    if (config.out && i + 1 == meshes.size())
      vtk::write_vtk(*config.out / (family_name(config.family) + ".vtk"), m,
                     projected_fields(m, problem, config.order, solution));
  }
  if (config.out) {
    std::ofstream csv(*config.out / (family_name(config.family) + ".csv"));
    if (!csv) throw std::runtime_error("cannot write CSV in " + config.out->string());
    write_csv(csv, record);
  }
  return record;
}

std::vector<double> rates(const std::vector<double>& h, const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  return out;
}

double least_squares_slope(const std::vector<double>& h, const std::vector<double>& errors) {
  const auto n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::string number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

}  // namespace

void write_csv(std::ostream& out, const ConvergenceRecord& record) {
  const bool saddle = record.family == Family::mcc || is_stokes(record.family);
  const bool stokes = is_stokes(record.family);
  out << "h,ndof,err_l2,err_h1" << (saddle ? ",err_p,err_pi_p" : "") << ",rate_l2,rate_h1"
      << (saddle ? ",rate_p,rate_pi_p" : "") << (stokes ? ",div_max" : "") << '\n';
  std::vector<double> h;
  std::array<std::vector<double>, 4> e;
  for (const auto& r : record.rows) {
    h.push_back(r.h);
    e[0].push_back(r.errors.l2);
    e[1].push_back(r.errors.h1);
    e[2].push_back(r.errors.p);
    e[3].push_back(r.errors.pi_p);
  }
  std::array<std::vector<double>, 4> rt;
  for (int j = 0; j < 4; ++j) rt[j] = rates(h, e[j]);
  const int ncols = saddle ? 4 : 2;
  for (std::size_t i = 0; i < record.rows.size(); ++i) {
    out << number(h[i]) << ',' << record.rows[i].ndof;
    for (int j = 0; j < ncols; ++j) out << ',' << number(e[j][i]);
    for (int j = 0; j < ncols; ++j) {
      out << ',';
      if (i > 0) out << number(rt[j][i - 1]);
    }
    if (stokes) out << ',' << number(record.rows[i].errors.div_max);
    out << '\n';
  }
}

}  // namespace vemkit::harness
