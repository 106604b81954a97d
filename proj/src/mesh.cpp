#include "olm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace olm {

namespace {

constexpr double k_degenerate_area = 1e-20;

void build_connectivity(SimplicialMesh& mesh) {
  mesh.facets.clear();
  mesh.boundary_facet_ids.clear();
  mesh.cell_facets.assign(mesh.cells.size(), Eigen::Vector3i::Constant(-1));

  std::map<std::pair<int, int>, int> facet_of_edge;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.cells[c][k];
      const int b = mesh.cells[c][(k + 1) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = facet_of_edge.find(key);
      if (it == facet_of_edge.end()) {
        Facet f;
        f.v0 = a;
        f.v1 = b;
        f.cell0 = c;
        f.local0 = k;
        const int id = static_cast<int>(mesh.facets.size());
        mesh.facets.push_back(f);
        facet_of_edge.emplace(key, id);
        mesh.cell_facets[c][k] = id;
      } else {
        Facet& f = mesh.facets[it->second];
        if (f.cell1 >= 0)
          throw std::invalid_argument("mesh: facet incident to more than two cells");
        f.cell1 = c;
        f.local1 = k;
        mesh.cell_facets[c][k] = it->second;
      }
    }
  }
  for (int f = 0; f < mesh.n_facets(); ++f)
    if (mesh.facets[f].on_boundary()) mesh.boundary_facet_ids.push_back(f);
}

}  // namespace

SimplicialMesh make_mesh(std::vector<Eigen::Vector2d> vertices,
                         std::vector<Eigen::Vector3i> cells) {
  const int nv = static_cast<int>(vertices.size());
  for (const Eigen::Vector3i& c : cells) {
    for (int k = 0; k < 3; ++k)
      if (c[k] < 0 || c[k] >= nv)
        throw std::invalid_argument("mesh: vertex index out of range");
    if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2])
      throw std::invalid_argument("mesh: repeated vertex in cell");
  }
  for (Eigen::Vector3i& c : cells) {
    const double a = 0.5 * cross2(vertices[c[1]] - vertices[c[0]],
                                  vertices[c[2]] - vertices[c[0]]);
    if (std::abs(a) < k_degenerate_area)
      throw std::invalid_argument("mesh: degenerate cell");
    if (a < 0) std::swap(c[1], c[2]);
  }
  SimplicialMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  build_connectivity(mesh);
  return mesh;
}

Eigen::Vector2d MeshTransform::apply(const Eigen::Vector2d& p) const {
  const double c = std::cos(rotation_angle);
  const double s = std::sin(rotation_angle);
  const Eigen::Vector2d d = p - center;
  return center + translation + Eigen::Vector2d(c * d.x() - s * d.y(), s * d.x() + c * d.y());
}

SimplicialMesh build_structured_square_mesh(const Eigen::Vector2d& corner_min,
                                            const Eigen::Vector2d& corner_max,
                                            int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_structured_square_mesh: non-positive subdivisions");
  if (!(corner_min.x() < corner_max.x()) || !(corner_min.y() < corner_max.y()))
    throw std::invalid_argument("build_structured_square_mesh: degenerate box");

  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  const Eigen::Vector2d extent = corner_max - corner_min;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(corner_min.x() + extent.x() * i / nx,
                            corner_min.y() + extent.y() * j / ny);

  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Eigen::Vector3i> cells;
  cells.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      // diagonal from the lower-left to the upper-right corner
      cells.emplace_back(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
      cells.emplace_back(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
    }
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

SimplicialMesh transform_mesh(const SimplicialMesh& mesh, const MeshTransform& t) {
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(mesh.vertices.size());
  for (const Eigen::Vector2d& p : mesh.vertices) vertices.push_back(t.apply(p));
  return make_mesh(std::move(vertices), mesh.cells);
}

Triangle cell_points(const SimplicialMesh& mesh, int cell) {
  if (cell < 0 || cell >= mesh.n_cells())
    throw std::out_of_range("cell index out of range");
  const Eigen::Vector3i& c = mesh.cells[cell];
  return {mesh.vertices[c[0]], mesh.vertices[c[1]], mesh.vertices[c[2]]};
}

double cell_area(const SimplicialMesh& mesh, int cell) {
  return triangle_signed_area(cell_points(mesh, cell));
}

double cell_diameter(const SimplicialMesh& mesh, int cell) {
  return triangle_diameter(cell_points(mesh, cell));
}

Eigen::Vector2d cell_centroid(const SimplicialMesh& mesh, int cell) {
  const Triangle t = cell_points(mesh, cell);
  return (t[0] + t[1] + t[2]) / 3.0;
}

double total_area(const SimplicialMesh& mesh) {
  double a = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) a += cell_area(mesh, c);
  return a;
}

double facet_length(const SimplicialMesh& mesh, int facet) {
  const Facet& f = mesh.facets.at(facet);
  return (mesh.vertices[f.v1] - mesh.vertices[f.v0]).norm();
}

const std::vector<int>& boundary_facets(const SimplicialMesh& mesh) {
  return mesh.boundary_facet_ids;
}

double boundary_perimeter(const SimplicialMesh& mesh) {
  double p = 0.0;
  for (int f : mesh.boundary_facet_ids) p += facet_length(mesh, f);
  return p;
}

SimplicialMesh read_mesh_ascii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1)
    throw std::runtime_error("malformed mesh header in " + path);
  std::vector<Eigen::Vector2d> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x() >> vertices[i].y()))
      throw std::runtime_error("malformed vertex line in " + path);
  std::vector<Eigen::Vector3i> cells(nc);
  for (int i = 0; i < nc; ++i)
    if (!(in >> cells[i][0] >> cells[i][1] >> cells[i][2]))
      throw std::runtime_error("malformed cell line in " + path);
  return make_mesh(std::move(vertices), std::move(cells));
}

void write_mesh_ascii(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out.precision(17);
  out << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  for (const Eigen::Vector2d& p : mesh.vertices) out << p.x() << ' ' << p.y() << '\n';
  for (const Eigen::Vector3i& c : mesh.cells)
    out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

}  // namespace olm
