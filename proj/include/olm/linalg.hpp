#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "olm/assembly.hpp"

namespace olm {

struct SolveResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||Ax-b|| / ||b|| of the pinned system
  int pinned_dof = -1;
};

// Sparse direct solve with the constant-pressure mode removed by pinning one
// pressure dof to zero. pinned_dof < 0 picks the first nullspace entry.
SolveResult solve(const LinearSystem& system, int pinned_dof = -1);

// Drop the given (sorted, unique) dofs from a square matrix or a vector.
SparseMat remove_dofs(const SparseMat& m, const std::vector<int>& dofs);
Eigen::VectorXd remove_dofs(const Eigen::VectorXd& v, const std::vector<int>& dofs);

// System with the Dirichlet dofs deleted; the remaining block is unchanged by
// the symmetric elimination, so this matches the operator on the constrained
// subspace.
SparseMat reduced_matrix(const LinearSystem& system);
Eigen::VectorXd reduced_nullspace(const LinearSystem& system);

struct SpectrumReport {
  double kappa = 0.0;        // max|λ| / min nonzero |λ|
  double max_abs = 0.0;
  double min_nonzero = 0.0;
  int n_zero = 0;            // eigenvalues below 1e-9 * max|λ|
};

// Dense symmetric eigensolve; eigenvalues below 1e-9*max|λ| count as zero.
// Finding more zeros than expected_null_dim is an error.
SpectrumReport analyze_spectrum(const SparseMat& a, int expected_null_dim);

double condition_number(const SparseMat& a, const Eigen::VectorXd& nullspace);

// Smallest nonzero generalized singular value of a in the inner product m,
// i.e. the smallest nonzero |λ| of m^{-1/2} a m^{-1/2}; m must be symmetric
// positive definite.
double generalized_min_singular(const SparseMat& a, const SparseMat& m);

// Header line, then "row col value" triples, 1-based.
void write_matrix_market(const SparseMat& a, const std::string& path);

}  // namespace olm
