#include "olm/spaces.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace olm {

ScalarP1Space make_p1_space(const SimplicialMesh& mesh) {
  std::vector<int> all(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) all[c] = c;
  return make_p1_space(mesh, std::move(all));
}

ScalarP1Space make_p1_space(const SimplicialMesh& mesh, std::vector<int> active_cells) {
  std::sort(active_cells.begin(), active_cells.end());
  active_cells.erase(std::unique(active_cells.begin(), active_cells.end()),
                     active_cells.end());
  ScalarP1Space space;
  space.mesh = &mesh;
  space.cell_active.assign(mesh.n_cells(), 0);
  space.vertex_to_dof.assign(mesh.n_vertices(), -1);
  for (int c : active_cells) {
    if (c < 0 || c >= mesh.n_cells())
      throw std::invalid_argument("make_p1_space: cell index out of range");
    space.cell_active[c] = 1;
  }
  space.active_cells = std::move(active_cells);
  std::vector<char> active_vertex(mesh.n_vertices(), 0);
  for (int c : space.active_cells)
    for (int k = 0; k < 3; ++k) active_vertex[mesh.cells[c][k]] = 1;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!active_vertex[v]) continue;
    space.vertex_to_dof[v] = space.n_dofs++;
    space.dof_to_vertex.push_back(v);
  }
  return space;
}

std::array<int, 3> ScalarP1Space::cell_dofs(int cell) const {
  if (cell < 0 || cell >= mesh->n_cells() || !cell_active[cell])
    throw std::invalid_argument("cell_dofs: cell not active");
  const Eigen::Vector3i& c = mesh->cells[cell];
  return {vertex_to_dof[c[0]], vertex_to_dof[c[1]], vertex_to_dof[c[2]]};
}

P1Basis p1_basis_unchecked(const SimplicialMesh& mesh, int cell,
                           const Eigen::Vector2d& p) {
  const Triangle t = cell_points(mesh, cell);
  const double a2 = cross2(t[1] - t[0], t[2] - t[0]);
  P1Basis basis;
  const Eigen::Vector3d bc = barycentric(t, p);
  basis.values = {bc[0], bc[1], bc[2]};
  basis.gradients = {perp(t[2] - t[1]) / a2, perp(t[0] - t[2]) / a2,
                     perp(t[1] - t[0]) / a2};
  return basis;
}

P1Basis eval_basis(const ScalarP1Space& space, int cell, const Eigen::Vector2d& p) {
  if (cell < 0 || cell >= space.mesh->n_cells() || !space.cell_active[cell])
    throw std::invalid_argument("eval_basis: cell not active");
  P1Basis basis = p1_basis_unchecked(*space.mesh, cell, p);
  if (std::min({basis.values[0], basis.values[1], basis.values[2]}) < -eps_geom)
    throw std::invalid_argument("eval_basis: point outside cell");
  return basis;
}

std::vector<int> CompositeStokesSpace::velocity_dofs() const {
  std::vector<int> dofs;
  dofs.reserve(2 * (bg_scalar.n_dofs + ov_scalar.n_dofs));
  for (int g = offset_u1; g < offset_p1; ++g) dofs.push_back(g);
  for (int g = offset_u2; g < offset_p2; ++g) dofs.push_back(g);
  return dofs;
}

std::vector<int> CompositeStokesSpace::pressure_dofs() const {
  std::vector<int> dofs;
  dofs.reserve(bg_scalar.n_dofs + ov_scalar.n_dofs);
  for (int g = offset_p1; g < offset_u2; ++g) dofs.push_back(g);
  for (int g = offset_p2; g < total_dofs; ++g) dofs.push_back(g);
  return dofs;
}

CompositeStokesSpace make_composite_space(const SimplicialMesh& bg,
                                          const SimplicialMesh& ov,
                                          const CutGeometry& geom) {
  CompositeStokesSpace space;
  space.bg = &bg;
  space.ov = &ov;
  space.bg_scalar = make_p1_space(bg, geom.t1_star_cells);
  space.ov_scalar = make_p1_space(ov);
  space.offset_u1 = 0;
  space.offset_p1 = 2 * space.bg_scalar.n_dofs;
  space.offset_u2 = space.offset_p1 + space.bg_scalar.n_dofs;
  space.offset_p2 = space.offset_u2 + 2 * space.ov_scalar.n_dofs;
  space.total_dofs = space.offset_p2 + space.ov_scalar.n_dofs;
  return space;
}

std::vector<int> boundary_velocity_dofs(const CompositeStokesSpace& space,
                                        const SimplicialMesh& bg) {
  std::set<int> verts;
  for (int f : bg.boundary_facet_ids) {
    verts.insert(bg.facets[f].v0);
    verts.insert(bg.facets[f].v1);
  }
  std::vector<int> dofs;
  for (int v : verts) {
    const int sdof = space.bg_scalar.vertex_to_dof[v];
    if (sdof < 0) continue;
    dofs.push_back(space.u1_dof(sdof, 0));
    dofs.push_back(space.u1_dof(sdof, 1));
  }
  std::sort(dofs.begin(), dofs.end());
  return dofs;
}

}  // namespace olm
