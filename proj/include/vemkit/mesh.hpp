#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vemkit/geometry.hpp"

namespace vemkit::mesh {

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Cell1D {
  std::array<int, 2> vertices{};
  int marker = 0;
  bool operator==(const Cell1D&) const = default;
};

struct Cell2D {
  std::vector<int> vertices;  // CCW
  std::vector<int> edges;     // edge i joins vertices[i] and vertices[i+1]
  int marker = 0;
  bool operator==(const Cell2D&) const = default;
};

/// Polygonal mesh: 0D, 1D and 2D cells with markers.  2D cells always carry
/// marker 0; boundary entities carry positive markers once assigned.
class Mesh2D {
public:
  Mesh2D() = default;
  Mesh2D(std::vector<Point> points, std::vector<int> point_markers, std::vector<Cell1D> edges,
         std::vector<Cell2D> cells);

  /// Builds the edge list from cell vertex loops (edge vertex pairs are stored
  /// lower index first).  All markers are 0.
  static Mesh2D from_polygons(std::vector<Point> points, const std::vector<std::vector<int>>& cells);

  int num_vertices() const { return static_cast<int>(points_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  const std::vector<Point>& points() const { return points_; }
  const Point& point(int i) const { return points_[i]; }
  int point_marker(int i) const { return point_markers_[i]; }
  const std::vector<int>& point_markers() const { return point_markers_; }
  const std::vector<Cell1D>& edges() const { return edges_; }
  const Cell1D& edge(int i) const { return edges_[i]; }
  const std::vector<Cell2D>& cells() const { return cells_; }
  const Cell2D& cell(int i) const { return cells_[i]; }

  void set_point_marker(int i, int marker) { point_markers_[i] = marker; }
  void set_edge_marker(int i, int marker) { edges_[i].marker = marker; }

  geometry::Polygon2D polygon(int cell) const;

  /// Number of cells adjacent to each edge (1 on the boundary).
  std::vector<int> edge_cell_counts() const;

  /// max over cells of the diameter
  double mesh_size() const;

  /// Throws MeshError when connectivity is inconsistent or a cell is not CCW.
  void validate() const;

  bool operator==(const Mesh2D&) const = default;

private:
  std::vector<Point> points_;
  std::vector<int> point_markers_;
  std::vector<Cell1D> edges_;
  std::vector<Cell2D> cells_;
};

struct Rectangle {
  Point lower{0.0, 0.0};
  Point upper{1.0, 1.0};
};

enum class StructuredType { quads, triangles, hanging_quads };

StructuredType parse_structured_type(const std::string& name);

/// n x n structured meshes.  hanging_quads splits the vertical edge between
/// cells (i, j) and (i+1, j) at its midpoint whenever i + j is even, giving
/// pentagons with a collinear (hanging) vertex.
Mesh2D generate_structured(const Rectangle& domain, StructuredType type, int n);

/// Marks boundary edges of an axis-aligned rectangle: bottom, right, top,
/// left.  A boundary vertex takes the minimum positive marker among its
/// boundary edges; interior entities get 0.
struct SideMarkers {
  int bottom = 1;
  int right = 2;
  int top = 3;
  int left = 4;
};
Mesh2D assign_boundary_markers(Mesh2D mesh, const Rectangle& domain, const SideMarkers& sides = {});

/// Line-oriented text format:
///   vemkit-mesh 1
///   <num_vertices> <num_edges> <num_cells>
///   x y marker                      (one line per vertex)
///   v0 v1 marker                    (one line per edge)
///   n v_0..v_{n-1} e_0..e_{n-1} marker (one line per cell)
/// Coordinates are written in shortest round-trip form.
void write_mesh(std::ostream& out, const Mesh2D& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh2D& mesh);
Mesh2D read_mesh(std::istream& in);
Mesh2D read_mesh(const std::filesystem::path& path);

}  // namespace vemkit::mesh
