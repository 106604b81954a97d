#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "olm/assembly.hpp"
#include "olm/geometry.hpp"
#include "olm/spaces.hpp"

namespace olm {

using MatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;  // (i,j) = ∂u_i/∂x_j

struct ErrorReport {
  int level = 0;
  double h_max = 0.0;
  int n_dofs = 0;
  double err_u_h1 = 0.0;  // ||∇(u-u_h)|| over full cells of both meshes
  double err_u_l2 = 0.0;
  double err_p_l2 = 0.0;  // after mean alignment over the physical domain
  double err_jump = 0.0;  // interface jump norm of u_h, weight h^{-1/2}-squared
};

// Broken norms integrate over full cells of T₁* and T₂ (the overlap region
// counts twice) with degree-4 quadrature.
double broken_h1_error(const CompositeStokesSpace& space, const Eigen::VectorXd& x,
                       const MatrixField& grad_u_exact);
double velocity_l2_error(const CompositeStokesSpace& space, const Eigen::VectorXd& x,
                         const VectorField& u_exact);

// Both pressures are shifted to zero mean over the physical domain (cut-cell
// integration on the background side) before the broken-norm evaluation.
double pressure_l2_error(const CompositeStokesSpace& space, const CutGeometry& geom,
                         const Eigen::VectorXd& x, const ScalarField& p_exact);

// sqrt( Σ_segments h^{-2*alpha} ∫ |[u_h]|² ), alpha in {-1/2, +1/2}.
double interface_jump_norm(const CompositeStokesSpace& space, const CutGeometry& geom,
                           const Eigen::VectorXd& x, double alpha);

// Least-squares slope of log e against log h.
double fit_rate(const std::vector<double>& h, const std::vector<double>& e);

struct NormGramBlocks {
  Triplets grad_velocity;  // ||∇v||² over full cells of both meshes
  Triplets interface;      // h||<∂_n v>||² + h^{-1}||[v]||² over the interface
  Triplets pressure_mass;  // ||q||² over full cells of both meshes
};

NormGramBlocks norm_gram_blocks(const CompositeStokesSpace& space,
                                const CutGeometry& geom);

// Gram matrix of the mesh-dependent product norm used by the stability
// analysis; positive definite once the Dirichlet velocity dofs are removed.
SparseMat build_norm_gram(const CompositeStokesSpace& space, const CutGeometry& geom);

}  // namespace olm
