#pragma once

// Global numbering of the DOFs attached to mesh vertices, edges and cells.

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "vemkit/mesh.hpp"

namespace vemkit::pde {

enum class DofKind { internal, weak, strong };

struct BoundaryCondition {
  int problem_marker = 0;
  DofKind kind = DofKind::internal;
};

/// Positive mesh marker -> condition.  Marker 0 is always internal.
using BoundaryConditionSpec = std::map<int, BoundaryCondition>;

struct DofCounts {
  int vertex = 0;
  int edge = 0;
  int cell = 0;
};

struct DofRecord {
  DofKind kind = DofKind::internal;
  int index = -1;           // unknown index, or strong index when kind == strong
  int problem_marker = 0;
};

struct DofTable {
  DofCounts counts;
  /// records[dim][entity * count + i]
  std::array<std::vector<DofRecord>, 3> records;
  int num_dofs = 0;
  int num_strong = 0;

  const DofRecord& vertex(int v, int i) const { return records[0][v * counts.vertex + i]; }
  const DofRecord& edge(int e, int i) const { return records[1][e * counts.edge + i]; }
  const DofRecord& cell(int c, int i) const { return records[2][c * counts.cell + i]; }
};

/// Vertex DOFs first, then edges, then cells.  Strong DOFs get their own
/// 0..N_strong-1 range.  Throws std::invalid_argument on an unmapped marker.
DofTable create_dof_table(const DofCounts& counts, const mesh::Mesh2D& mesh, const BoundaryConditionSpec& bc);

/// How edge DOFs react when an element runs along an edge against its
/// stored direction (v0 -> v1): the edge DOFs come in groups of
/// `group_size` per point; point order is reversed, and the sign flipped
/// when `negate_on_reverse` is set (normal fluxes).
struct Orientation {
  int group_size = 1;
  bool negate_on_reverse = false;
};

struct Slot {
  bool strong = false;
  int index = -1;
  double sign = 1.0;
};

/// Local slots follow the element's vertex, edge, cell order.
std::vector<Slot> local_to_global(const DofTable& table, const mesh::Mesh2D& mesh, int cell,
                                  const Orientation& orientation = {});

}  // namespace vemkit::pde
