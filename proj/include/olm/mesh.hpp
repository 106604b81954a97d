#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "olm/core.hpp"

namespace olm {

// Edge of a triangle mesh. Boundary edges have cell1 == -1.
// Local edge k of a cell runs from its vertex k to vertex (k+1)%3.
struct Facet {
  int v0 = -1;
  int v1 = -1;
  int cell0 = -1;
  int local0 = -1;
  int cell1 = -1;
  int local1 = -1;

  bool on_boundary() const { return cell1 < 0; }
};

// 2D triangle mesh. Cells are counter-clockwise; facet connectivity is built
// eagerly by make_mesh and the mesh is treated as immutable afterwards.
struct SimplicialMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Eigen::Vector3i> cells;
  std::vector<Facet> facets;
  std::vector<int> boundary_facet_ids;
  std::vector<Eigen::Vector3i> cell_facets;  // facet id of local edge k

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }
};

// Validates indices, enforces counter-clockwise cell orientation (flipping
// where needed), rejects degenerate cells and builds facet connectivity.
SimplicialMesh make_mesh(std::vector<Eigen::Vector2d> vertices,
                         std::vector<Eigen::Vector3i> cells);

// Rotation about `center` followed by a translation.
struct MeshTransform {
  double rotation_angle = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
};

// Uniform triangulation of [corner_min, corner_max]: nx-by-ny squares, each
// split into two triangles by the diagonal from its lower-left corner.
SimplicialMesh build_structured_square_mesh(const Eigen::Vector2d& corner_min,
                                            const Eigen::Vector2d& corner_max,
                                            int nx, int ny);

SimplicialMesh transform_mesh(const SimplicialMesh& mesh, const MeshTransform& t);

Triangle cell_points(const SimplicialMesh& mesh, int cell);
double cell_area(const SimplicialMesh& mesh, int cell);
double cell_diameter(const SimplicialMesh& mesh, int cell);
Eigen::Vector2d cell_centroid(const SimplicialMesh& mesh, int cell);
double total_area(const SimplicialMesh& mesh);
double facet_length(const SimplicialMesh& mesh, int facet);

// Facets incident to exactly one cell; for the overlapping mesh these
// discretize the interface.
const std::vector<int>& boundary_facets(const SimplicialMesh& mesh);
double boundary_perimeter(const SimplicialMesh& mesh);

// Plain-ASCII format: line 1 "nv nc"; nv lines "x y"; nc lines "i j k" (0-based).
SimplicialMesh read_mesh_ascii(const std::string& path);
void write_mesh_ascii(const SimplicialMesh& mesh, const std::string& path);

}  // namespace olm
