#include "vemkit/dofs.hpp"

#include <string>

namespace vemkit::pde {

namespace {

DofRecord classify(int marker, const BoundaryConditionSpec& bc) {
  if (marker == 0) return {};
  const auto it = bc.find(marker);
  if (it == bc.end()) throw std::invalid_argument("no boundary condition for mesh marker " + std::to_string(marker));
  return {it->second.kind, -1, it->second.problem_marker};
}

}  // namespace

DofTable create_dof_table(const DofCounts& counts, const mesh::Mesh2D& mesh, const BoundaryConditionSpec& bc) {
  DofTable table;
  table.counts = counts;
  auto enumerate = [&](std::vector<DofRecord>& out, int entities, int count, auto marker_of) {
    out.resize(static_cast<std::size_t>(entities) * count);
    for (int e = 0; e < entities && count > 0; ++e) {
      DofRecord record = classify(marker_of(e), bc);
      for (int i = 0; i < count; ++i) {
        record.index = record.kind == DofKind::strong ? table.num_strong++ : table.num_dofs++;
        out[static_cast<std::size_t>(e) * count + i] = record;
      }
    }
  };
  enumerate(table.records[0], mesh.num_vertices(), counts.vertex, [&](int v) { return mesh.point_marker(v); });
  enumerate(table.records[1], mesh.num_edges(), counts.edge, [&](int e) { return mesh.edge(e).marker; });
  enumerate(table.records[2], mesh.num_cells(), counts.cell, [](int) { return 0; });
  return table;
}

std::vector<Slot> local_to_global(const DofTable& table, const mesh::Mesh2D& mesh, int cell,
                                  const Orientation& orientation) {
  const auto& c = mesh.cell(cell);
  const int nv = static_cast<int>(c.vertices.size());
  const auto& counts = table.counts;
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(nv) * (counts.vertex + counts.edge) + counts.cell);
  auto push = [&](const DofRecord& r, double sign) {
    slots.push_back({r.kind == DofKind::strong, r.index, sign});
  };
  for (int v : c.vertices)
    for (int i = 0; i < counts.vertex; ++i) push(table.vertex(v, i), 1.0);
  const int group = orientation.group_size;
  const int points = counts.edge / group;
  for (int i = 0; i < nv; ++i) {
    const int e = c.edges[i];
    const bool reversed = mesh.edge(e).vertices[0] != c.vertices[i];
    const double sign = reversed && orientation.negate_on_reverse ? -1.0 : 1.0;
    for (int p = 0; p < points; ++p) {
      const int source = reversed ? points - 1 - p : p;
      for (int g = 0; g < group; ++g) push(table.edge(e, source * group + g), sign);
    }
  }
  for (int i = 0; i < counts.cell; ++i) push(table.cell(cell, i), 1.0);
  return slots;
}

}  // namespace vemkit::pde
