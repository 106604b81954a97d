#include "olm/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "olm/quadrature.hpp"

namespace olm {

namespace {

constexpr int k_error_degree = 4;  // against transcendental exact solutions

std::array<Eigen::Vector2d, 3> cell_gradients(const SimplicialMesh& mesh, int cell) {
  const Triangle t = cell_points(mesh, cell);
  const double a2 = cross2(t[1] - t[0], t[2] - t[0]);
  return {perp(t[2] - t[1]) / a2, perp(t[0] - t[2]) / a2, perp(t[1] - t[0]) / a2};
}

// discrete velocity Jacobian on one cell (constant for P1)
Eigen::Matrix2d velocity_jacobian(const SimplicialMesh& mesh, int cell,
                                  const std::array<int, 3>& sdofs,
                                  const std::function<int(int, int)>& u_dof,
                                  const Eigen::VectorXd& x) {
  const std::array<Eigen::Vector2d, 3> grad = cell_gradients(mesh, cell);
  Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 2; ++c) j.row(c) += x[u_dof(sdofs[i], c)] * grad[i].transpose();
  return j;
}

// iterate over both active meshes with their dof maps
template <class F>
void for_each_active_cell(const CompositeStokesSpace& space, F&& visit) {
  for (int cell : space.bg_scalar.active_cells)
    visit(*space.bg, cell, space.bg_scalar.cell_dofs(cell),
          std::function<int(int, int)>([&](int s, int c) { return space.u1_dof(s, c); }),
          std::function<int(int)>([&](int s) { return space.p1_dof(s); }));
  for (int cell = 0; cell < space.ov->n_cells(); ++cell)
    visit(*space.ov, cell, space.ov_scalar.cell_dofs(cell),
          std::function<int(int, int)>([&](int s, int c) { return space.u2_dof(s, c); }),
          std::function<int(int)>([&](int s) { return space.p2_dof(s); }));
}

}  // namespace

double broken_h1_error(const CompositeStokesSpace& space, const Eigen::VectorXd& x,
                       const MatrixField& grad_u_exact) {
  double err2 = 0.0;
  for_each_active_cell(space, [&](const SimplicialMesh& mesh, int cell,
                                  const std::array<int, 3>& sdofs,
                                  const std::function<int(int, int)>& u_dof,
                                  const std::function<int(int)>&) {
    const Eigen::Matrix2d jh = velocity_jacobian(mesh, cell, sdofs, u_dof, x);
    const QuadratureRule rule = triangle_rule(cell_points(mesh, cell), k_error_degree);
    err2 += rule.integrate([&](const Eigen::Vector2d& p) {
      return (grad_u_exact(p) - jh).squaredNorm();
    });
  });
  return std::sqrt(err2);
}

double velocity_l2_error(const CompositeStokesSpace& space, const Eigen::VectorXd& x,
                         const VectorField& u_exact) {
  double err2 = 0.0;
  for_each_active_cell(space, [&](const SimplicialMesh& mesh, int cell,
                                  const std::array<int, 3>& sdofs,
                                  const std::function<int(int, int)>& u_dof,
                                  const std::function<int(int)>&) {
    const QuadratureRule rule = triangle_rule(cell_points(mesh, cell), k_error_degree);
    err2 += rule.integrate([&](const Eigen::Vector2d& p) {
      const P1Basis basis = p1_basis_unchecked(mesh, cell, p);
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) uh[c] += x[u_dof(sdofs[i], c)] * basis.values[i];
      return (u_exact(p) - uh).squaredNorm();
    });
  });
  return std::sqrt(err2);
}

double pressure_l2_error(const CompositeStokesSpace& space, const CutGeometry& geom,
                         const Eigen::VectorXd& x, const ScalarField& p_exact) {
  // means over the physical domain: cut cells on the background side
  double volume = 0.0, int_exact = 0.0, int_h = 0.0;
  for (int cell : space.bg_scalar.active_cells) {
    const std::array<int, 3> sdofs = space.bg_scalar.cell_dofs(cell);
    auto ph = [&](const Eigen::Vector2d& p) {
      const P1Basis basis = p1_basis_unchecked(*space.bg, cell, p);
      double v = 0.0;
      for (int i = 0; i < 3; ++i) v += x[space.p1_dof(sdofs[i])] * basis.values[i];
      return v;
    };
    volume += integrate_over_cut_part(*space.bg, geom, cell, k_error_degree,
                                      [](const Eigen::Vector2d&) { return 1.0; });
    int_exact += integrate_over_cut_part(*space.bg, geom, cell, k_error_degree, p_exact);
    int_h += integrate_over_cut_part(*space.bg, geom, cell, k_error_degree, ph);
  }
  for (int cell = 0; cell < space.ov->n_cells(); ++cell) {
    const std::array<int, 3> sdofs = space.ov_scalar.cell_dofs(cell);
    const QuadratureRule rule = triangle_rule(cell_points(*space.ov, cell), k_error_degree);
    volume += rule.total_weight();
    int_exact += rule.integrate(p_exact);
    int_h += rule.integrate([&](const Eigen::Vector2d& p) {
      const P1Basis basis = p1_basis_unchecked(*space.ov, cell, p);
      double v = 0.0;
      for (int i = 0; i < 3; ++i) v += x[space.p2_dof(sdofs[i])] * basis.values[i];
      return v;
    });
  }
  const double mean_exact = int_exact / volume;
  const double mean_h = int_h / volume;

  double err2 = 0.0;
  for_each_active_cell(space, [&](const SimplicialMesh& mesh, int cell,
                                  const std::array<int, 3>& sdofs,
                                  const std::function<int(int, int)>&,
                                  const std::function<int(int)>& p_dof) {
    const QuadratureRule rule = triangle_rule(cell_points(mesh, cell), k_error_degree);
    err2 += rule.integrate([&](const Eigen::Vector2d& p) {
      const P1Basis basis = p1_basis_unchecked(mesh, cell, p);
      double ph = 0.0;
      for (int i = 0; i < 3; ++i) ph += x[p_dof(sdofs[i])] * basis.values[i];
      const double d = (p_exact(p) - mean_exact) - (ph - mean_h);
      return d * d;
    });
  });
  return std::sqrt(err2);
}

double interface_jump_norm(const CompositeStokesSpace& space, const CutGeometry& geom,
                           const Eigen::VectorXd& x, double alpha) {
  double norm2 = 0.0;
  for (const InterfaceSegment& seg : geom.interface_segments) {
    const std::array<int, 3> s1 = space.bg_scalar.cell_dofs(seg.bg_cell);
    const std::array<int, 3> s2 = space.ov_scalar.cell_dofs(seg.ov_cell);
    const double weight = std::pow(seg.h_penalty, -2.0 * alpha);
    const QuadratureRule rule = segment_rule(seg.a, seg.b, 2);
    norm2 += weight * rule.integrate([&](const Eigen::Vector2d& p) {
      const P1Basis b1 = p1_basis_unchecked(*space.bg, seg.bg_cell, p);
      const P1Basis b2 = p1_basis_unchecked(*space.ov, seg.ov_cell, p);
      Eigen::Vector2d jump = Eigen::Vector2d::Zero();
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c)
          jump[c] += x[space.u2_dof(s2[i], c)] * b2.values[i] -
                     x[space.u1_dof(s1[i], c)] * b1.values[i];
      return jump.squaredNorm();
    });
  }
  return std::sqrt(norm2);
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2)
    throw std::invalid_argument("fit_rate: need at least two (h, e) pairs");
  const int n = static_cast<int>(h.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(h[i] > 0) || !(e[i] > 0))
      throw std::invalid_argument("fit_rate: entries must be positive");
    lx[i] = std::log(h[i]);
    ly[i] = std::log(e[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all h equal");
  return sxy / sxx;
}

NormGramBlocks norm_gram_blocks(const CompositeStokesSpace& space,
                                const CutGeometry& geom) {
  NormGramBlocks blocks;

  for_each_active_cell(space, [&](const SimplicialMesh& mesh, int cell,
                                  const std::array<int, 3>& sdofs,
                                  const std::function<int(int, int)>& u_dof,
                                  const std::function<int(int)>& p_dof) {
    const std::array<Eigen::Vector2d, 3> grad = cell_gradients(mesh, cell);
    const double area = cell_area(mesh, cell);
    const QuadratureRule rule = triangle_rule(cell_points(mesh, cell), 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double k_ij = grad[i].dot(grad[j]) * area;
        for (int c = 0; c < 2; ++c)
          blocks.grad_velocity.emplace_back(u_dof(sdofs[i], c), u_dof(sdofs[j], c), k_ij);
        double m_ij = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const P1Basis basis = p1_basis_unchecked(mesh, cell, rule.points[q]);
          m_ij += rule.weights[q] * basis.values[i] * basis.values[j];
        }
        blocks.pressure_mass.emplace_back(p_dof(sdofs[i]), p_dof(sdofs[j]), m_ij);
      }
    }
  });

  for (const InterfaceSegment& seg : geom.interface_segments) {
    const std::array<int, 3> s1 = space.bg_scalar.cell_dofs(seg.bg_cell);
    const std::array<int, 3> s2 = space.ov_scalar.cell_dofs(seg.ov_cell);
    const std::array<Eigen::Vector2d, 3> grad2 = cell_gradients(*space.ov, seg.ov_cell);
    const QuadratureRule rule = segment_rule(seg.a, seg.b, 2);
    for (int k = 0; k < rule.size(); ++k) {
      const double w = rule.weights[k];
      const P1Basis b1 = p1_basis_unchecked(*space.bg, seg.bg_cell, rule.points[k]);
      const P1Basis b2 = p1_basis_unchecked(*space.ov, seg.ov_cell, rule.points[k]);
      std::array<int, 6> sdof;
      std::array<double, 6> jump, dnormal;
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
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
          // h^{-1} ||[v]||^2 + h ||<dn v>||^2 on this segment
          const double val = w * (jump[a] * jump[b] / seg.h_penalty +
                                  seg.h_penalty * dnormal[a] * dnormal[b]);
          if (val == 0.0) continue;
          for (int c = 0; c < 2; ++c)
            blocks.interface.emplace_back(vel_dof(a, c), vel_dof(b, c), val);
        }
    }
  }
  return blocks;
}

SparseMat build_norm_gram(const CompositeStokesSpace& space, const CutGeometry& geom) {
  NormGramBlocks blocks = norm_gram_blocks(space, geom);
  Triplets all = std::move(blocks.grad_velocity);
  all.insert(all.end(), blocks.interface.begin(), blocks.interface.end());
  all.insert(all.end(), blocks.pressure_mass.begin(), blocks.pressure_mass.end());
  return matrix_from_triplets(space.total_dofs, all);
}

}  // namespace olm
