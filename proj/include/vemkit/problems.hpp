#pragma once

// Manufactured problems for the convergence studies and patch tests.

#include <span>
#include <string>

#include "vemkit/assembly.hpp"

namespace vemkit::harness {

enum class Family { pcc, elasticity, mcc, df_stokes, df_stokes_reduced };

Family parse_family(const std::string& name);
std::string family_name(Family family);
bool is_stokes(Family family);

/// Unused members are left empty.  grad_v(x)(c, j) = d v_c / d x_j.
struct ManufacturedProblem {
  Family family = Family::pcc;
  mesh::Rectangle domain;
  pde::BoundaryConditionSpec bc;

  pde::ScalarField u;
  pde::VectorField grad_u;
  pde::VectorField v;
  pde::TensorField grad_v;
  pde::ScalarField div_v;
  pde::ScalarField p;

  pde::ScalarField scalar_source;
  pde::VectorField vector_source;

  pde::TensorField diffusion;  // D for pcc, K for mcc
  pde::ScalarField lambda;
  pde::ScalarField mu;
  pde::ScalarField viscosity;
};

/// Smooth solutions used by the convergence studies; Dirichlet on every
/// side except mcc, which prescribes the pressure naturally.
ManufacturedProblem default_problem(Family family);

/// Polynomial solution reproduced exactly by order k on the unit square.
/// Sides: bottom/right strong, top/left weak (Stokes: all strong).
ManufacturedProblem patch_problem(Family family, int k);

struct Solution {
  pde::AssembledSystem assembled;
  pde::SolveResult result;
};

/// Assembles and solves.  The mesh must carry boundary markers.
Solution solve_problem(const mesh::Mesh2D& mesh, const ManufacturedProblem& problem, int k,
                       pcc::Stabilization stabilization = pcc::Stabilization::dofi_dofi,
                       std::span<const int> element_order = {});

}  // namespace vemkit::harness
