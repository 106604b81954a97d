#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <utility>
#include <vector>

#include "olm/geometry.hpp"
#include "olm/spaces.hpp"

namespace olm {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<double>>;

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

struct StokesProblem {
  VectorField f;  // body force
  VectorField g;  // Dirichlet datum on the outer boundary
  double gamma = 10.0;  // Nitsche penalty
  double delta = 0.05;  // least-squares stabilization weight
  int alpha = 1;        // in {-1,0,1}; inert for P1 (element Laplacians vanish)
  double beta = 1.0;    // in {-1,1}
};

struct LinearSystem {
  SparseMat matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd nullspace;  // unit vector spanning the constant-pressure mode
  std::vector<std::pair<int, double>> constrained;  // Dirichlet dof -> value
};

// Per-cell kernels (scalar P1).
Eigen::Matrix3d local_stiffness(const Triangle& tri);
// Contribution of one cell to -S_h for k = 1: -delta*beta*h_T^2 (∇p,∇q)_T.
Eigen::Matrix3d local_pressure_stabilization(const Triangle& tri, double delta,
                                             double beta);

// Volume terms of a_h and b_h plus the (f,v) load: background cells integrate
// over T ∩ Ω₁ by subtracting the overlap pieces, overlapping-mesh cells over
// full cells.
void assemble_bulk(const CompositeStokesSpace& space, const CutGeometry& geom,
                   const StokesProblem& problem, Triplets& out, Eigen::VectorXd& rhs);

// Nitsche interface terms of a_h and the pressure-average terms of b_h over
// the interface segments; averages are taken from the overlapping mesh.
void assemble_interface(const CompositeStokesSpace& space, const CutGeometry& geom,
                        const StokesProblem& problem, Triplets& out);

// s_h: gradient of the difference of the two velocity solutions over the
// overlap region. Positive semidefinite.
void assemble_overlap_stabilization(const CompositeStokesSpace& space,
                                    const CutGeometry& geom, Triplets& out);

// -S_h into the matrix and the matching load correction into the rhs, over
// full cells of both active meshes.
void assemble_least_squares_stabilization(const CompositeStokesSpace& space,
                                          const StokesProblem& problem, Triplets& out,
                                          Eigen::VectorXd& rhs);

std::vector<std::pair<int, double>> dirichlet_values(const CompositeStokesSpace& space,
                                                     const SimplicialMesh& bg,
                                                     const VectorField& g);

// Symmetric elimination: subtract columns into the rhs, zero rows and columns,
// unit diagonal, rhs entry = boundary value.
void apply_dirichlet(LinearSystem& system,
                     const std::vector<std::pair<int, double>>& bcs);

struct AssemblyOptions {
  bool with_overlap_stabilization = true;  // omit s_h for the ablation study
};

LinearSystem assemble_system(const CompositeStokesSpace& space, const CutGeometry& geom,
                             const StokesProblem& problem,
                             const AssemblyOptions& options = {});

// Convenience orchestrator building the cut geometry and composite space
// internally.
LinearSystem assemble_system(const SimplicialMesh& bg, const SimplicialMesh& ov,
                             const StokesProblem& problem,
                             const AssemblyOptions& options = {});

SparseMat matrix_from_triplets(int n, const Triplets& triplets);

}  // namespace olm
