#pragma once

// Legacy ASCII VTK output on the per-cell sub-triangulation.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vemkit/mesh.hpp"

namespace vemkit::vtk {

/// value(cell, x) returns `components` numbers (1 = scalar, 2 = vector).
struct PointField {
  std::string name;
  int components = 1;
  std::function<Eigen::VectorXd(int, const Point&)> value;
};

/// Vertices are duplicated per cell so fields may jump across edges.
void write_vtk(std::ostream& out, const mesh::Mesh2D& mesh, const std::vector<PointField>& fields);
void write_vtk(const std::filesystem::path& path, const mesh::Mesh2D& mesh, const std::vector<PointField>& fields);

}  // namespace vemkit::vtk
