#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vemkit/errors.hpp"

namespace vemkit::harness {

struct StudyConfig {
  Family family = Family::pcc;
  int order = 1;
  std::string mesh = "quads";  // quads | triangles | hanging_quads | file:<path>
  int refinements = 4;
  int base_cells = 4;          // cells per side of the coarsest structured mesh
  pcc::Stabilization stabilization = pcc::Stabilization::dofi_dofi;
  std::optional<std::filesystem::path> out;  // CSV and VTK directory
};

struct StudyRow {
  double h = 0.0;
  int ndof = 0;
  ErrorNorms errors;
  double residual = 0.0;
  double residual_bound = 0.0;
};

struct ConvergenceRecord {
  Family family = Family::pcc;
  std::vector<StudyRow> rows;
};

/// Throws pde::SolverError (message names the mesh size) when a solve fails.
ConvergenceRecord run_convergence_study(const StudyConfig& config);

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}); size n - 1.
std::vector<double> rates(const std::vector<double>& h, const std::vector<double>& errors);

/// Least-squares slope of log(e) against log(h).
double least_squares_slope(const std::vector<double>& h, const std::vector<double>& errors);

/// Columns: h,ndof,err_l2,err_h1[,err_p,err_pi_p],rate_l2,rate_h1[,rate_p,rate_pi_p][,div_max]
void write_csv(std::ostream& out, const ConvergenceRecord& record);

/// Meshes of the study, markers assigned.
std::vector<mesh::Mesh2D> study_meshes(const StudyConfig& config, const mesh::Rectangle& domain);

}  // namespace vemkit::harness
