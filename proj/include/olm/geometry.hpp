#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "olm/core.hpp"
#include "olm/mesh.hpp"

namespace olm {

// Absolute geometric tolerance; meshes are assumed O(1) in size. Vertices
// closer than eps_geom are merged during clipping.
inline constexpr double eps_geom = 1e-10;

// Relative area tolerance for the overlap classification of background cells.
inline constexpr double eps_class = 1e-9;

// Partition of the background cells by their overlap with the inner domain.
struct CellClassification {
  std::vector<int> not_overlapped;        // |T ∩ Ω₂| = 0
  std::vector<int> fully_overlapped;      // |T ∩ Ω₂| = |T|
  std::vector<int> partially_overlapped;  // anything in between
};

// Intersection of one background cell with one overlapping-mesh cell.
struct OverlapPiece {
  int bg_cell = -1;
  int ov_cell = -1;
  ConvexPolygon polygon;
};

// Piece of a boundary facet of the overlapping mesh lying in one background
// cell. The normal is the unit outward normal of the overlapping domain,
// i.e. directed from the inner domain into the outer one.
struct InterfaceSegment {
  Eigen::Vector2d a, b;
  int bg_cell = -1;
  int ov_cell = -1;
  int ov_facet = -1;
  Eigen::Vector2d normal;
  double h_penalty = 0.0;  // diameter of the owning overlapping-mesh cell

  double length() const { return (b - a).norm(); }
  Eigen::Vector2d midpoint() const { return 0.5 * (a + b); }
};

struct CutGeometry {
  CellClassification classification;
  std::vector<OverlapPiece> overlap_pieces;
  std::vector<InterfaceSegment> interface_segments;
  std::vector<int> t1_star_cells;                   // sorted, active background cells
  std::vector<char> in_t1_star;                     // per background cell
  std::vector<std::vector<int>> pieces_of_bg_cell;  // indices into overlap_pieces
  double mesh_compat_ratio = 1.0;  // max h-ratio over interface-adjacent cell pairs

  double overlap_area(int bg_cell) const;  // Σ piece areas of one cell
};

// Convex intersection polygon of two triangles (possibly empty), CCW, with
// duplicate and collinear vertices removed under eps_geom.
ConvexPolygon clip_triangle_triangle(const Triangle& t1, const Triangle& t2);

// Classifies every background cell by the clipped-area criterion. Requires the
// overlapping mesh to lie strictly inside the background domain.
CellClassification classify_cells(const SimplicialMesh& bg, const SimplicialMesh& ov);

CutGeometry build_cut_geometry(const SimplicialMesh& bg, const SimplicialMesh& ov);

// ∫_{T ∩ Ω₁} f for a cell of T₁*, computed as the full-cell integral minus the
// overlap pieces; f must be integrable by the requested degree on all of T.
double integrate_over_cut_part(const SimplicialMesh& bg, const CutGeometry& geom,
                               int bg_cell, int degree,
                               const std::function<double(const Eigen::Vector2d&)>& f);

// Lowest-id cell containing p (barycentric coordinates >= -eps_geom).
std::optional<int> locate_point(const SimplicialMesh& mesh, const Eigen::Vector2d& p);

Eigen::Vector3d barycentric(const Triangle& t, const Eigen::Vector2d& p);

}  // namespace olm
