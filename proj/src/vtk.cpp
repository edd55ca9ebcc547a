#include "vemkit/vtk.hpp"

#include <fstream>
#include <ostream>

namespace vemkit::vtk {

void write_vtk(std::ostream& out, const mesh::Mesh2D& mesh, const std::vector<PointField>& fields) {
  std::vector<int> owner;
  std::vector<Point> points;
  std::vector<std::array<int, 3>> triangles;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto polygon = mesh.polygon(c);
    const int base = static_cast<int>(points.size());
    for (const auto& v : polygon.vertices()) {
      points.push_back(v);
      owner.push_back(c);
    }
    for (const auto& t : geometry::ear_clip(polygon).triangles) triangles.push_back({base + t[0], base + t[1], base + t[2]});
  }
  out.precision(17);
  out << "# vtk DataFile Version 3.0\nvemkit output\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const auto& p : points) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << triangles.size() << ' ' << 4 * triangles.size() << '\n';
  for (const auto& t : triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << triangles.size() << '\n';
  for (std::size_t i = 0; i < triangles.size(); ++i) out << "5\n";
  if (fields.empty()) return;
  out << "POINT_DATA " << points.size() << '\n';
  for (const auto& f : fields) {
    if (f.components == 1)
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    else
      out << "VECTORS " << f.name << " double\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Eigen::VectorXd v = f.value(owner[i], points[i]);
      if (f.components == 1)
        out << v(0) << '\n';
      else
        out << v(0) << ' ' << v(1) << " 0\n";
    }
  }
}

void write_vtk(const std::filesystem::path& path, const mesh::Mesh2D& mesh, const std::vector<PointField>& fields) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_vtk(out, mesh, fields);
}

}  // namespace vemkit::vtk
