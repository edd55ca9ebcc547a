#include "vemkit/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace vemkit::mesh {

Mesh2D::Mesh2D(std::vector<Point> points, std::vector<int> point_markers, std::vector<Cell1D> edges,
               std::vector<Cell2D> cells)
    : points_(std::move(points)),
      point_markers_(std::move(point_markers)),
      edges_(std::move(edges)),
      cells_(std::move(cells)) {
  validate();
}

Mesh2D Mesh2D::from_polygons(std::vector<Point> points, const std::vector<std::vector<int>>& loops) {
  std::map<std::pair<int, int>, int> edge_ids;
  std::vector<Cell1D> edges;
  std::vector<Cell2D> cells;
  cells.reserve(loops.size());
  for (const auto& loop : loops) {
    Cell2D cell;
    cell.vertices = loop;
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, static_cast<int>(edges.size()));
      if (inserted) edges.push_back(Cell1D{{key.first, key.second}, 0});
      cell.edges.push_back(it->second);
    }
    cells.push_back(std::move(cell));
  }
  std::vector<int> markers(points.size(), 0);
  return Mesh2D(std::move(points), std::move(markers), std::move(edges), std::move(cells));
}

geometry::Polygon2D Mesh2D::polygon(int cell) const {
  std::vector<Point> v;
  v.reserve(cells_[cell].vertices.size());
  for (int id : cells_[cell].vertices) v.push_back(points_[id]);
  return geometry::Polygon2D(std::move(v));
}

std::vector<int> Mesh2D::edge_cell_counts() const {
  std::vector<int> counts(edges_.size(), 0);
  for (const auto& c : cells_)
    for (int e : c.edges) ++counts[e];
  return counts;
}

double Mesh2D::mesh_size() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, polygon(c).diameter());
  return h;
}

void Mesh2D::validate() const {
  const int nv = num_vertices();
  const int ne = num_edges();
  if (static_cast<int>(point_markers_.size()) != nv) throw MeshError("vertex marker count mismatch");
  for (int e = 0; e < ne; ++e) {
    for (int v : edges_[e].vertices)
      if (v < 0 || v >= nv) throw MeshError("edge " + std::to_string(e) + " references missing vertex");
    if (edges_[e].vertices[0] == edges_[e].vertices[1])
      throw MeshError("edge " + std::to_string(e) + " is degenerate");
  }
  for (int c = 0; c < num_cells(); ++c) {
    const auto& cell = cells_[c];
    const int n = static_cast<int>(cell.vertices.size());
    if (n < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    if (static_cast<int>(cell.edges.size()) != n)
      throw MeshError("cell " + std::to_string(c) + " edge count differs from vertex count");
    if (cell.marker != 0) throw MeshError("2D cells must carry marker 0");
    for (int i = 0; i < n; ++i) {
      const int v = cell.vertices[i];
      const int e = cell.edges[i];
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references missing vertex");
      if (e < 0 || e >= ne) throw MeshError("cell " + std::to_string(c) + " references missing edge");
      const auto [a, b] = std::minmax(v, cell.vertices[(i + 1) % n]);
      const auto& ev = edges_[e].vertices;
      if (std::min(ev[0], ev[1]) != a || std::max(ev[0], ev[1]) != b)
        throw MeshError("cell " + std::to_string(c) + " edge " + std::to_string(e) +
                        " does not join consecutive vertices");
    }
    std::vector<Point> loop;
    for (int v : cell.vertices) loop.push_back(points_[v]);
    if (geometry::signed_area(loop) <= 0.0)
      throw MeshError("cell " + std::to_string(c) + " is not counterclockwise");
  }
  const auto counts = edge_cell_counts();
  for (int e = 0; e < ne; ++e) {
    if (counts[e] == 0) throw MeshError("edge " + std::to_string(e) + " belongs to no cell");
    if (counts[e] > 2) throw MeshError("edge " + std::to_string(e) + " is shared by more than two cells");
  }
}

StructuredType parse_structured_type(const std::string& name) {
  if (name == "quads") return StructuredType::quads;
  if (name == "triangles") return StructuredType::triangles;
  if (name == "hanging_quads") return StructuredType::hanging_quads;
  throw MeshError("unknown structured mesh type '" + name + "'");
}

Mesh2D generate_structured(const Rectangle& domain, StructuredType type, int n) {
  if (n < 1) throw MeshError("generate_structured: n must be at least 1");
  const Eigen::Vector2d size = domain.upper - domain.lower;
  if (!(size.x() > 0.0) || !(size.y() > 0.0)) throw MeshError("generate_structured: degenerate domain");

  std::vector<Point> points;
  points.reserve((n + 1) * (n + 1));
  auto node = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      points.emplace_back(domain.lower.x() + size.x() * i / n, domain.lower.y() + size.y() * j / n);

  std::vector<std::vector<int>> cells;
  if (type == StructuredType::triangles) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        cells.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
        cells.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
      }
    return Mesh2D::from_polygons(std::move(points), cells);
  }

  // midpoint of the vertical edge right of cell (i, j), or -1
  std::vector<int> hanging(n * n, -1);
  if (type == StructuredType::hanging_quads) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i + 1 < n; ++i)
        if ((i + j) % 2 == 0) {
          hanging[j * n + i] = static_cast<int>(points.size());
          points.emplace_back(domain.lower.x() + size.x() * (i + 1) / n,
                              domain.lower.y() + size.y() * (j + 0.5) / n);
        }
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::vector<int> loop{node(i, j), node(i + 1, j)};
      if (hanging[j * n + i] >= 0) loop.push_back(hanging[j * n + i]);
      loop.push_back(node(i + 1, j + 1));
      loop.push_back(node(i, j + 1));
      if (i > 0 && hanging[j * n + i - 1] >= 0) loop.push_back(hanging[j * n + i - 1]);
      cells.push_back(std::move(loop));
    }
  return Mesh2D::from_polygons(std::move(points), cells);
}

Mesh2D assign_boundary_markers(Mesh2D mesh, const Rectangle& domain, const SideMarkers& sides) {
  const double tol = 1e-12 * (domain.upper - domain.lower).norm();
  auto side_of = [&](const Point& p, const Point& q) {
    if (std::abs(p.y() - domain.lower.y()) <= tol && std::abs(q.y() - domain.lower.y()) <= tol)
      return sides.bottom;
    if (std::abs(p.x() - domain.upper.x()) <= tol && std::abs(q.x() - domain.upper.x()) <= tol)
      return sides.right;
    if (std::abs(p.y() - domain.upper.y()) <= tol && std::abs(q.y() - domain.upper.y()) <= tol)
      return sides.top;
    if (std::abs(p.x() - domain.lower.x()) <= tol && std::abs(q.x() - domain.lower.x()) <= tol)
      return sides.left;
    return 0;
  };

  const auto counts = mesh.edge_cell_counts();
  for (int v = 0; v < mesh.num_vertices(); ++v) mesh.set_point_marker(v, 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (counts[e] != 1) {
      mesh.set_edge_marker(e, 0);
      continue;
    }
    const auto& ev = mesh.edge(e).vertices;
    const int marker = side_of(mesh.point(ev[0]), mesh.point(ev[1]));
    if (marker <= 0)
      throw MeshError("assign_boundary_markers: boundary edge " + std::to_string(e) +
                      " does not lie on the rectangle sides");
    mesh.set_edge_marker(e, marker);
    for (int v : ev) {
      const int current = mesh.point_marker(v);
      mesh.set_point_marker(v, current == 0 ? marker : std::min(current, marker));
    }
  }
  return mesh;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw MeshError("malformed number '" + token + "'");
  return value;
}

std::istringstream next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    return std::istringstream(line);
  }
  throw MeshError(std::string("unexpected end of file while reading ") + what);
}

template <typename T>
T read_value(std::istringstream& line, const char* what) {
  T value{};
  if (!(line >> value)) throw MeshError(std::string("malformed ") + what + " line");
  return value;
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh2D& mesh) {
  out << "vemkit-mesh 1\n";
  out << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_cells() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << format_double(mesh.point(v).x()) << ' ' << format_double(mesh.point(v).y()) << ' '
        << mesh.point_marker(v) << '\n';
  for (const auto& e : mesh.edges()) out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.marker << '\n';
  for (const auto& c : mesh.cells()) {
    out << c.vertices.size();
    for (int v : c.vertices) out << ' ' << v;
    for (int e : c.edges) out << ' ' << e;
    out << ' ' << c.marker << '\n';
  }
}

void write_mesh(const std::filesystem::path& path, const Mesh2D& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path.string() + "' for writing");
  write_mesh(out, mesh);
}

Mesh2D read_mesh(std::istream& in) {
  {
    auto header = next_line(in, "header");
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != "vemkit-mesh" || version != 1) throw MeshError("not a vemkit-mesh version 1 file");
  }
  auto counts = next_line(in, "counts");
  const int nv = read_value<int>(counts, "counts");
  const int ne = read_value<int>(counts, "counts");
  const int nc = read_value<int>(counts, "counts");
  if (nv < 0 || ne < 0 || nc < 0) throw MeshError("negative entity count");

  std::vector<Point> points(nv);
  std::vector<int> markers(nv);
  for (int v = 0; v < nv; ++v) {
    auto line = next_line(in, "vertex");
    const double x = parse_double(read_value<std::string>(line, "vertex"));
    const double y = parse_double(read_value<std::string>(line, "vertex"));
    points[v] = Point(x, y);
    markers[v] = read_value<int>(line, "vertex");
  }
  std::vector<Cell1D> edges(ne);
  for (int e = 0; e < ne; ++e) {
    auto line = next_line(in, "edge");
    edges[e].vertices[0] = read_value<int>(line, "edge");
    edges[e].vertices[1] = read_value<int>(line, "edge");
    edges[e].marker = read_value<int>(line, "edge");
  }
  std::vector<Cell2D> cells(nc);
  for (int c = 0; c < nc; ++c) {
    auto line = next_line(in, "cell");
    const int n = read_value<int>(line, "cell");
    if (n < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    cells[c].vertices.resize(n);
    cells[c].edges.resize(n);
    for (int i = 0; i < n; ++i) cells[c].vertices[i] = read_value<int>(line, "cell");
    for (int i = 0; i < n; ++i) cells[c].edges[i] = read_value<int>(line, "cell");
    cells[c].marker = read_value<int>(line, "cell");
  }
  return Mesh2D(std::move(points), std::move(markers), std::move(edges), std::move(cells));
}

Mesh2D read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path.string() + "'");
  return read_mesh(in);
}

}  // namespace vemkit::mesh
