#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

#include "olm/geometry.hpp"
#include "olm/mesh.hpp"

namespace olm {

struct P1Basis {
  std::array<double, 3> values;
  std::array<Eigen::Vector2d, 3> gradients;
};

// Continuous piecewise-linear scalar space on (a subset of the cells of) a
// mesh. Degrees of freedom are the vertices of the active cells.
struct ScalarP1Space {
  const SimplicialMesh* mesh = nullptr;
  std::vector<int> active_cells;   // sorted
  std::vector<char> cell_active;   // per cell
  std::vector<int> vertex_to_dof;  // -1 for vertices of inactive cells only
  std::vector<int> dof_to_vertex;
  int n_dofs = 0;

  std::array<int, 3> cell_dofs(int cell) const;
  bool is_active(int cell) const { return cell_active[cell] != 0; }
};

ScalarP1Space make_p1_space(const SimplicialMesh& mesh);
ScalarP1Space make_p1_space(const SimplicialMesh& mesh, std::vector<int> active_cells);

// Hat-function values and (constant) gradients on a cell; p must lie inside
// the cell up to eps_geom.
P1Basis eval_basis(const ScalarP1Space& space, int cell, const Eigen::Vector2d& p);

// Same evaluation without the containment check: the affine extension of the
// cell's basis, valid wherever the caller knows what it is doing.
P1Basis p1_basis_unchecked(const SimplicialMesh& mesh, int cell, const Eigen::Vector2d& p);

// Direct sum of the velocity/pressure P1 spaces on both meshes. Global dof
// blocks are ordered [u1, p1, u2, p2]; velocity components are interleaved
// per vertex inside each velocity block.
struct CompositeStokesSpace {
  const SimplicialMesh* bg = nullptr;
  const SimplicialMesh* ov = nullptr;
  ScalarP1Space bg_scalar;  // on T₁*
  ScalarP1Space ov_scalar;  // whole overlapping mesh
  int offset_u1 = 0, offset_p1 = 0, offset_u2 = 0, offset_p2 = 0;
  int total_dofs = 0;

  int u1_dof(int sdof, int comp) const { return offset_u1 + 2 * sdof + comp; }
  int p1_dof(int sdof) const { return offset_p1 + sdof; }
  int u2_dof(int sdof, int comp) const { return offset_u2 + 2 * sdof + comp; }
  int p2_dof(int sdof) const { return offset_p2 + sdof; }

  bool is_velocity_dof(int g) const {
    return (g >= offset_u1 && g < offset_p1) || (g >= offset_u2 && g < offset_p2);
  }
  bool is_pressure_dof(int g) const { return !is_velocity_dof(g) && g < total_dofs; }

  std::vector<int> velocity_dofs() const;
  std::vector<int> pressure_dofs() const;
};

CompositeStokesSpace make_composite_space(const SimplicialMesh& bg,
                                          const SimplicialMesh& ov,
                                          const CutGeometry& geom);

// Background-velocity dofs whose vertex lies on the outer boundary, both
// components; overlapping-mesh dofs are never included.
std::vector<int> boundary_velocity_dofs(const CompositeStokesSpace& space,
                                        const SimplicialMesh& bg);

}  // namespace olm
