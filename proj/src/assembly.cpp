#include "olm/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "olm/quadrature.hpp"

namespace olm {

namespace {

constexpr int k_matrix_degree = 2;  // exact for all P1 x P1 products
constexpr int k_load_degree = 4;    // headroom for transcendental body forces

void validate(const StokesProblem& problem) {
  if (!(problem.gamma > 0)) throw std::invalid_argument("StokesProblem: gamma must be positive");
  if (!(problem.delta >= 0)) throw std::invalid_argument("StokesProblem: delta must be non-negative");
  if (problem.alpha < -1 || problem.alpha > 1)
    throw std::invalid_argument("StokesProblem: alpha must be in {-1,0,1}");
  if (problem.beta != 1.0 && problem.beta != -1.0)
    throw std::invalid_argument("StokesProblem: beta must be in {-1,1}");
}

std::array<Eigen::Vector2d, 3> cell_gradients(const SimplicialMesh& mesh, int cell) {
  const Triangle t = cell_points(mesh, cell);
  const double a2 = cross2(t[1] - t[0], t[2] - t[0]);
  return {perp(t[2] - t[1]) / a2, perp(t[0] - t[2]) / a2, perp(t[1] - t[0]) / a2};
}

// volume terms of one cell integrated by the given rules (full cell on the
// overlapping mesh, full-minus-pieces on the background)
struct CellRules {
  std::vector<QuadratureRule> matrix_rules;  // signed via `signs`
  std::vector<QuadratureRule> load_rules;
  std::vector<double> signs;
};

CellRules cut_cell_rules(const SimplicialMesh& bg, const CutGeometry& geom, int cell) {
  CellRules r;
  r.matrix_rules.push_back(triangle_rule(cell_points(bg, cell), k_matrix_degree));
  r.load_rules.push_back(triangle_rule(cell_points(bg, cell), k_load_degree));
  r.signs.push_back(1.0);
  for (int i : geom.pieces_of_bg_cell[cell]) {
    r.matrix_rules.push_back(polygon_rule(geom.overlap_pieces[i].polygon, k_matrix_degree));
    r.load_rules.push_back(polygon_rule(geom.overlap_pieces[i].polygon, k_load_degree));
    r.signs.push_back(-1.0);
  }
  return r;
}

// a_h volume block, b_h volume blocks and the (f,v) load of one cell
void scatter_cell_volume(const SimplicialMesh& mesh, int cell,
                         const std::array<int, 3>& sdofs,
                         const std::function<int(int, int)>& u_dof,
                         const std::function<int(int)>& p_dof, const CellRules& rules,
                         const VectorField& f, Triplets& out, Eigen::VectorXd& rhs) {
  const std::array<Eigen::Vector2d, 3> grad = cell_gradients(mesh, cell);

  double measure = 0.0;               // |T ∩ Ω_i|
  Eigen::Vector3d moments = Eigen::Vector3d::Zero();  // ∫ λ_j
  for (std::size_t r = 0; r < rules.matrix_rules.size(); ++r) {
    const QuadratureRule& q = rules.matrix_rules[r];
    for (int k = 0; k < q.size(); ++k) {
      const double w = rules.signs[r] * q.weights[k];
      measure += w;
      const P1Basis basis = p1_basis_unchecked(mesh, cell, q.points[k]);
      for (int j = 0; j < 3; ++j) moments[j] += w * basis.values[j];
    }
  }

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double k_ij = grad[i].dot(grad[j]) * measure;
      for (int c = 0; c < 2; ++c)
        out.emplace_back(u_dof(sdofs[i], c), u_dof(sdofs[j], c), k_ij);
      // b_h(v, p) and b_h(u, q): -(∇·v, q)
      for (int c = 0; c < 2; ++c) {
        const double b_ij = -grad[i][c] * moments[j];
        out.emplace_back(u_dof(sdofs[i], c), p_dof(sdofs[j]), b_ij);
        out.emplace_back(p_dof(sdofs[j]), u_dof(sdofs[i], c), b_ij);
      }
    }
  }

  if (f) {
    for (std::size_t r = 0; r < rules.load_rules.size(); ++r) {
      const QuadratureRule& q = rules.load_rules[r];
      for (int k = 0; k < q.size(); ++k) {
        const double w = rules.signs[r] * q.weights[k];
        const Eigen::Vector2d fx = f(q.points[k]);
        const P1Basis basis = p1_basis_unchecked(mesh, cell, q.points[k]);
        for (int i = 0; i < 3; ++i)
          for (int c = 0; c < 2; ++c)
            rhs[u_dof(sdofs[i], c)] += w * fx[c] * basis.values[i];
      }
    }
  }
}

}  // namespace

Eigen::Matrix3d local_stiffness(const Triangle& tri) {
  const double a2 = cross2(tri[1] - tri[0], tri[2] - tri[0]);
  const std::array<Eigen::Vector2d, 3> grad = {
      perp(tri[2] - tri[1]) / a2, perp(tri[0] - tri[2]) / a2, perp(tri[1] - tri[0]) / a2};
  Eigen::Matrix3d k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = grad[i].dot(grad[j]) * 0.5 * a2;
  return k;
}

Eigen::Matrix3d local_pressure_stabilization(const Triangle& tri, double delta,
                                             double beta) {
  const double h = triangle_diameter(tri);
  return -delta * beta * h * h * local_stiffness(tri);
}

void assemble_bulk(const CompositeStokesSpace& space, const CutGeometry& geom,
                   const StokesProblem& problem, Triplets& out, Eigen::VectorXd& rhs) {
  auto u1 = [&](int s, int c) { return space.u1_dof(s, c); };
  auto p1 = [&](int s) { return space.p1_dof(s); };
  for (int cell : geom.t1_star_cells)
    scatter_cell_volume(*space.bg, cell, space.bg_scalar.cell_dofs(cell), u1, p1,
                        cut_cell_rules(*space.bg, geom, cell), problem.f, out, rhs);

  auto u2 = [&](int s, int c) { return space.u2_dof(s, c); };
  auto p2 = [&](int s) { return space.p2_dof(s); };
  for (int cell = 0; cell < space.ov->n_cells(); ++cell) {
    CellRules rules;
    rules.matrix_rules.push_back(triangle_rule(cell_points(*space.ov, cell), k_matrix_degree));
    rules.load_rules.push_back(triangle_rule(cell_points(*space.ov, cell), k_load_degree));
    rules.signs.push_back(1.0);
    scatter_cell_volume(*space.ov, cell, space.ov_scalar.cell_dofs(cell), u2, p2, rules,
                        problem.f, out, rhs);
  }
}

void assemble_interface(const CompositeStokesSpace& space, const CutGeometry& geom,
                        const StokesProblem& problem, Triplets& out) {
  for (const InterfaceSegment& seg : geom.interface_segments) {
    if (seg.bg_cell < 0 || !space.bg_scalar.is_active(seg.bg_cell))
      throw std::runtime_error("assemble_interface: segment without active host cell");
    const std::array<int, 3> s1 = space.bg_scalar.cell_dofs(seg.bg_cell);
    const std::array<int, 3> s2 = space.ov_scalar.cell_dofs(seg.ov_cell);
    const std::array<Eigen::Vector2d, 3> grad2 = cell_gradients(*space.ov, seg.ov_cell);
    const double penalty = problem.gamma / seg.h_penalty;

    // jump [w] = w_2 - w_1; average <w> = w_2
    const QuadratureRule rule = segment_rule(seg.a, seg.b, k_matrix_degree);
    for (int k = 0; k < rule.size(); ++k) {
      const double w = rule.weights[k];
      const Eigen::Vector2d& x = rule.points[k];
      const P1Basis b1 = p1_basis_unchecked(*space.bg, seg.bg_cell, x);
      const P1Basis b2 = p1_basis_unchecked(*space.ov, seg.ov_cell, x);

      // 6 velocity trial/test functions per component: 3 background, 3 overlapping
      std::array<int, 6> sdof;
      std::array<double, 6> jump;   // trace of the jump
      std::array<double, 6> dnormal;  // <∂_n ·>, overlapping side only
      std::array<bool, 6> is_ov;
      for (int i = 0; i < 3; ++i) {
        sdof[i] = s1[i];
        jump[i] = -b1.values[i];
        dnormal[i] = 0.0;
        is_ov[i] = false;
        sdof[3 + i] = s2[i];
        jump[3 + i] = b2.values[i];
        dnormal[3 + i] = seg.normal.dot(grad2[i]);
        is_ov[3 + i] = true;
      }
      auto vel_dof = [&](int a, int c) {
        return is_ov[a] ? space.u2_dof(sdof[a], c) : space.u1_dof(sdof[a], c);
      };

      for (int a = 0; a < 6; ++a) {      // test
        for (int b = 0; b < 6; ++b) {    // trial
          const double val =
              w * (-dnormal[b] * jump[a] - dnormal[a] * jump[b] + penalty * jump[a] * jump[b]);
          if (val == 0.0) continue;
          for (int c = 0; c < 2; ++c) out.emplace_back(vel_dof(a, c), vel_dof(b, c), val);
        }
        // b_h interface term: (n·[v], <q>) with <q> = q_2
        for (int j = 0; j < 3; ++j) {
          for (int c = 0; c < 2; ++c) {
            const double val = w * seg.normal[c] * jump[a] * b2.values[j];
            out.emplace_back(vel_dof(a, c), space.p2_dof(s2[j]), val);
            out.emplace_back(space.p2_dof(s2[j]), vel_dof(a, c), val);
          }
        }
      }
    }
  }
}

void assemble_overlap_stabilization(const CompositeStokesSpace& space,
                                    const CutGeometry& geom, Triplets& out) {
  for (const OverlapPiece& piece : geom.overlap_pieces) {
    const double area = piece.polygon.area();
    if (area <= 0.0) continue;
    const std::array<int, 3> s1 = space.bg_scalar.cell_dofs(piece.bg_cell);
    const std::array<int, 3> s2 = space.ov_scalar.cell_dofs(piece.ov_cell);
    const std::array<Eigen::Vector2d, 3> g1 = cell_gradients(*space.bg, piece.bg_cell);
    const std::array<Eigen::Vector2d, 3> g2 = cell_gradients(*space.ov, piece.ov_cell);

    // gradient of the difference: +∇ on the background, -∇ on the overlapping mesh
    std::array<Eigen::Vector2d, 6> grad;
    std::array<int, 6> sdof;
    std::array<bool, 6> is_ov;
    for (int i = 0; i < 3; ++i) {
      grad[i] = g1[i];
      sdof[i] = s1[i];
      is_ov[i] = false;
      grad[3 + i] = -g2[i];
      sdof[3 + i] = s2[i];
      is_ov[3 + i] = true;
    }
    auto vel_dof = [&](int a, int c) {
      return is_ov[a] ? space.u2_dof(sdof[a], c) : space.u1_dof(sdof[a], c);
    };
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double val = area * grad[a].dot(grad[b]);
        for (int c = 0; c < 2; ++c) out.emplace_back(vel_dof(a, c), vel_dof(b, c), val);
      }
  }
}

void assemble_least_squares_stabilization(const CompositeStokesSpace& space,
                                          const StokesProblem& problem, Triplets& out,
                                          Eigen::VectorXd& rhs) {
  auto scatter = [&](const SimplicialMesh& mesh, int cell, const std::array<int, 3>& sdofs,
                     const std::function<int(int)>& p_dof) {
    const Triangle tri = cell_points(mesh, cell);
    const Eigen::Matrix3d k = local_pressure_stabilization(tri, problem.delta, problem.beta);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.emplace_back(p_dof(sdofs[i]), p_dof(sdofs[j]), k(i, j));
    if (problem.f) {
      const double h = triangle_diameter(tri);
      const std::array<Eigen::Vector2d, 3> grad = cell_gradients(mesh, cell);
      const QuadratureRule rule = triangle_rule(tri, k_load_degree);
      Eigen::Vector2d f_int = Eigen::Vector2d::Zero();
      for (int q = 0; q < rule.size(); ++q) f_int += rule.weights[q] * problem.f(rule.points[q]);
      for (int i = 0; i < 3; ++i)
        rhs[p_dof(sdofs[i])] -= problem.delta * problem.beta * h * h * f_int.dot(grad[i]);
    }
  };

  auto p1 = [&](int s) { return space.p1_dof(s); };
  for (int cell : space.bg_scalar.active_cells)
    scatter(*space.bg, cell, space.bg_scalar.cell_dofs(cell), p1);
  auto p2 = [&](int s) { return space.p2_dof(s); };
  for (int cell = 0; cell < space.ov->n_cells(); ++cell)
    scatter(*space.ov, cell, space.ov_scalar.cell_dofs(cell), p2);
}

std::vector<std::pair<int, double>> dirichlet_values(const CompositeStokesSpace& space,
                                                     const SimplicialMesh& bg,
                                                     const VectorField& g) {
  std::vector<std::pair<int, double>> bcs;
  for (int dof : boundary_velocity_dofs(space, bg)) {
    const int sdof = (dof - space.offset_u1) / 2;
    const int comp = (dof - space.offset_u1) % 2;
    const Eigen::Vector2d x = bg.vertices[space.bg_scalar.dof_to_vertex[sdof]];
    bcs.emplace_back(dof, g ? g(x)[comp] : 0.0);
  }
  return bcs;
}

void apply_dirichlet(LinearSystem& system, const std::vector<std::pair<int, double>>& bcs) {
  const int n = static_cast<int>(system.matrix.rows());
  std::vector<char> fixed(n, 0);
  std::vector<double> value(n, 0.0);
  for (const auto& [dof, v] : bcs) {
    if (dof < 0 || dof >= n) throw std::invalid_argument("apply_dirichlet: dof out of range");
    fixed[dof] = 1;
    value[dof] = v;
  }
  SparseMat& a = system.matrix;
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMat::InnerIterator it(a, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      if (fixed[c] && !fixed[r]) system.rhs[r] -= it.value() * value[c];
      if (fixed[r] || fixed[c]) it.valueRef() = 0.0;
    }
  }
  for (const auto& [dof, v] : bcs) {
    a.coeffRef(dof, dof) = 1.0;
    system.rhs[dof] = v;
  }
  system.constrained.insert(system.constrained.end(), bcs.begin(), bcs.end());
}

SparseMat matrix_from_triplets(int n, const Triplets& triplets) {
  SparseMat m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

LinearSystem assemble_system(const CompositeStokesSpace& space, const CutGeometry& geom,
                             const StokesProblem& problem, const AssemblyOptions& options) {
  validate(problem);
  LinearSystem system;
  system.rhs = Eigen::VectorXd::Zero(space.total_dofs);

  Triplets triplets;
  for (int i = 0; i < space.total_dofs; ++i) triplets.emplace_back(i, i, 0.0);
  assemble_bulk(space, geom, problem, triplets, system.rhs);
  assemble_interface(space, geom, problem, triplets);
  if (options.with_overlap_stabilization)
    assemble_overlap_stabilization(space, geom, triplets);
  assemble_least_squares_stabilization(space, problem, triplets, system.rhs);
  system.matrix = matrix_from_triplets(space.total_dofs, triplets);

  system.nullspace = Eigen::VectorXd::Zero(space.total_dofs);
  for (int g : space.pressure_dofs()) system.nullspace[g] = 1.0;
  system.nullspace.normalize();

  apply_dirichlet(system, dirichlet_values(space, *space.bg, problem.g));
  return system;
}

LinearSystem assemble_system(const SimplicialMesh& bg, const SimplicialMesh& ov,
                             const StokesProblem& problem, const AssemblyOptions& options) {
  const CutGeometry geom = build_cut_geometry(bg, ov);
  const CompositeStokesSpace space = make_composite_space(bg, ov, geom);
  return assemble_system(space, geom, problem, options);
}

}  // namespace olm
