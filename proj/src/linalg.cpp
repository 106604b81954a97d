#include "olm/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace olm {

namespace {

constexpr double k_null_tol = 1e-9;  // relative eigenvalue threshold for the nullspace

Eigen::VectorXd symmetric_eigenvalues(const SparseMat& a) {
  Eigen::MatrixXd dense(a);
  const double scale = dense.cwiseAbs().maxCoeff();
  const double asym = (dense - dense.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0 && asym > 1e-10 * scale)
    throw std::invalid_argument("spectrum: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (dense + dense.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver failed");
  return solver.eigenvalues();
}

SpectrumReport report_from_eigenvalues(const Eigen::VectorXd& ev, int expected_null_dim) {
  SpectrumReport report;
  report.max_abs = ev.cwiseAbs().maxCoeff();
  const double threshold = k_null_tol * report.max_abs;
  report.min_nonzero = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    const double m = std::abs(ev[i]);
    if (m < threshold)
      ++report.n_zero;
    else
      report.min_nonzero = std::min(report.min_nonzero, m);
  }
  if (report.n_zero > expected_null_dim)
    throw std::runtime_error("spectrum: found " + std::to_string(report.n_zero) +
                             " near-zero eigenvalues, expected at most " +
                             std::to_string(expected_null_dim));
  if (!std::isfinite(report.min_nonzero))
    throw std::runtime_error("spectrum: no nonzero eigenvalues");
  report.kappa = report.max_abs / report.min_nonzero;
  return report;
}

}  // namespace

SolveResult solve(const LinearSystem& system, int pinned_dof) {
  if (pinned_dof < 0 && system.nullspace.size() > 0) {
    for (int i = 0; i < system.nullspace.size(); ++i) {
      if (system.nullspace[i] != 0.0) {
        pinned_dof = i;
        break;
      }
    }
  }
  LinearSystem pinned = system;
  if (pinned_dof >= 0) apply_dirichlet(pinned, {{pinned_dof, 0.0}});

  Eigen::SparseMatrix<double> a = pinned.matrix;  // column-major for the factorization
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse factorization failed (" +
                             lu.lastErrorMessage() + ")");
  SolveResult result;
  result.x = lu.solve(pinned.rhs);
  result.pinned_dof = pinned_dof;
  const double bnorm = pinned.rhs.norm();
  const double rnorm = (pinned.matrix * result.x - pinned.rhs).norm();
  result.residual = bnorm > 0 ? rnorm / bnorm : rnorm;
  return result;
}

SparseMat remove_dofs(const SparseMat& m, const std::vector<int>& dofs) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> keep(n, 0);
  for (int d : dofs) {
    if (d < 0 || d >= n) throw std::invalid_argument("remove_dofs: dof out of range");
    keep[d] = -1;
  }
  int next = 0;
  for (int i = 0; i < n; ++i)
    if (keep[i] == 0) keep[i] = next++;
  Triplets triplets;
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMat::InnerIterator it(m, r); it; ++it) {
      const int rr = keep[it.row()];
      const int cc = keep[it.col()];
      if (rr >= 0 && cc >= 0 && it.value() != 0.0) triplets.emplace_back(rr, cc, it.value());
    }
  }
  SparseMat out(next, next);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd remove_dofs(const Eigen::VectorXd& v, const std::vector<int>& dofs) {
  std::vector<char> drop(v.size(), 0);
  for (int d : dofs) drop.at(d) = 1;
  Eigen::VectorXd out(v.size() - static_cast<int>(dofs.size()));
  int next = 0;
  for (int i = 0; i < v.size(); ++i)
    if (!drop[i]) out[next++] = v[i];
  return out;
}

namespace {
std::vector<int> constrained_dofs(const LinearSystem& system) {
  std::vector<int> dofs;
  dofs.reserve(system.constrained.size());
  for (const auto& [d, v] : system.constrained) dofs.push_back(d);
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}
}  // namespace

SparseMat reduced_matrix(const LinearSystem& system) {
  return remove_dofs(system.matrix, constrained_dofs(system));
}

Eigen::VectorXd reduced_nullspace(const LinearSystem& system) {
  Eigen::VectorXd ns = remove_dofs(system.nullspace, constrained_dofs(system));
  const double norm = ns.norm();
  if (norm > 0) ns /= norm;
  return ns;
}

SpectrumReport analyze_spectrum(const SparseMat& a, int expected_null_dim) {
  return report_from_eigenvalues(symmetric_eigenvalues(a), expected_null_dim);
}

double condition_number(const SparseMat& a, const Eigen::VectorXd& nullspace) {
  const int expected = (nullspace.size() > 0 && nullspace.norm() > 0) ? 1 : 0;
  return analyze_spectrum(a, expected).kappa;
}

double generalized_min_singular(const SparseMat& a, const SparseMat& m) {
  if (a.rows() != m.rows())
    throw std::invalid_argument("generalized_min_singular: size mismatch");
  Eigen::MatrixXd md(m);
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (md + md.transpose()));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("generalized_min_singular: norm Gram not positive definite");
  Eigen::MatrixXd ad(a);
  // B = L^{-1} A L^{-T}; the generalized singular values of A in the M inner
  // product are the |eigenvalues| of B
  Eigen::MatrixXd x = llt.matrixL().solve(ad);
  Eigen::MatrixXd b = llt.matrixL().solve(x.transpose());
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized_min_singular: eigensolver failed");
  return report_from_eigenvalues(solver.eigenvalues(), 1).min_nonzero;
}

void write_matrix_market(const SparseMat& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (int r = 0; r < a.outerSize(); ++r)
    for (SparseMat::InnerIterator it(a, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace olm
