#pragma once

// Global assembly of the four model problems.  Strong DOFs are eliminated
// and lifted to the right-hand side; weak boundary data enters as boundary
// integrals.

#include <functional>
#include <span>
#include <vector>

#include "vemkit/dofs.hpp"
#include "vemkit/linear_system.hpp"
#include "vemkit/mesh.hpp"
#include "vemkit/pcc2d.hpp"

namespace vemkit::pde {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
using TensorField = std::function<Eigen::Matrix2d(const Point&)>;
/// Boundary data that may depend on the outward unit normal.
using NormalData = std::function<double(const Point&, const Eigen::Vector2d&)>;
using NormalVectorData = std::function<Eigen::Vector2d(const Point&, const Eigen::Vector2d&)>;

/// One unknown field: its numbering, orientation rule, strong values and the
/// position of its first unknown in the global system.
struct Field {
  DofTable table;
  Orientation orientation;
  Eigen::VectorXd strong_values;
  int offset = 0;
};

/// Local DOF vector of `cell` read from a global solution.
Eigen::VectorXd gather(const Field& field, const mesh::Mesh2D& mesh, int cell, const Eigen::VectorXd& x);

struct AssembledSystem {
  LinearSystem system;
  std::vector<Field> fields;
  int multiplier = -1;  // index of the zero-mean multiplier, if any
};

/// -div(D grad u) = f.  Strong kinds take `dirichlet`, weak kinds add
/// \int_e g v with g = neumann(x, n) = (D grad u) . n.
struct DiffusionData {
  int order = 1;
  pcc::Stabilization stabilization = pcc::Stabilization::dofi_dofi;
  TensorField diffusion;
  ScalarField source;
  ScalarField dirichlet;
  NormalData neumann;
  BoundaryConditionSpec bc;
};

/// -div(2 mu eps(u) + lambda div(u) I) = f; weak kinds add the traction.
struct ElasticityData {
  int order = 1;
  pcc::Stabilization stabilization = pcc::Stabilization::dofi_dofi;
  ScalarField lambda;
  ScalarField mu;
  VectorField source;
  VectorField dirichlet;
  NormalVectorData traction;
  BoundaryConditionSpec bc;
};

/// u = -K grad p, div u = f.  Strong kinds prescribe u . n (from `flux`),
/// weak kinds prescribe the pressure naturally.
struct DarcyData {
  int order = 0;
  TensorField permeability;
  ScalarField source;
  ScalarField pressure;
  VectorField flux;
  BoundaryConditionSpec bc;
};

/// -nu Lap(u) - grad p = f, div u = 0, zero-mean pressure, Dirichlet velocity.
struct StokesData {
  int order = 2;
  bool reduced = false;
  ScalarField viscosity;
  VectorField source;
  VectorField dirichlet;
  BoundaryConditionSpec bc;
};

/// `element_order` permutes the element loop (empty = natural order).
AssembledSystem assemble_diffusion(const mesh::Mesh2D& mesh, const DiffusionData& data,
                                   std::span<const int> element_order = {});
AssembledSystem assemble_elasticity(const mesh::Mesh2D& mesh, const ElasticityData& data,
                                    std::span<const int> element_order = {});
AssembledSystem assemble_mixed_darcy(const mesh::Mesh2D& mesh, const DarcyData& data,
                                     std::span<const int> element_order = {});
AssembledSystem assemble_stokes(const mesh::Mesh2D& mesh, const StokesData& data,
                                std::span<const int> element_order = {});

}  // namespace vemkit::pde
