#pragma once

#include <limits>
#include <vector>

#include "vemkit/df2d.hpp"
#include "vemkit/problems.hpp"
#include "vemkit/vtk.hpp"

namespace vemkit::harness {

/// err_l2: solution (velocity for saddle problems) against its L2 projection.
/// err_h1: gradient error through the projected gradient; for mcc it holds the
/// L2 error of the divergence instead.  err_p / err_pi_p: pressure error and
/// distance between p_h and the elementwise L2 projection of p.  div_max:
/// max |div u_h| at quadrature points (Stokes only).
struct ErrorNorms {
  static constexpr double none = std::numeric_limits<double>::quiet_NaN();
  double l2 = 0.0;
  double h1 = 0.0;
  double p = none;
  double pi_p = none;
  double div_max = none;
};

ErrorNorms compute_errors(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k, const Solution& solution);

/// Projected fields for output: u (pcc), displacement (elasticity),
/// velocity and pressure (mcc, Stokes).
std::vector<vtk::PointField> projected_fields(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k,
                                             const Solution& solution);

/// Local velocity DOFs of a Stokes cell in the full space (reduced solutions
/// get zero div moments).
Eigen::VectorXd stokes_local_velocity(const mesh::Mesh2D& mesh, const Solution& solution, const df::LocalSpaceData& space,
                                      int cell, bool reduced);

}  // namespace vemkit::harness
