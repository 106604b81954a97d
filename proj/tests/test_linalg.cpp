#include <doctest.h>

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "olm/experiments.hpp"
#include "olm/linalg.hpp"
#include "oracles.hpp"

namespace {

olm::SparseMat sparse_from_dense(const Eigen::MatrixXd& d) {
  olm::Triplets t;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) t.emplace_back(i, j, d(i, j));
  olm::SparseMat m(d.rows(), d.cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("solve: identity and 2x2 systems") {
  {
    olm::LinearSystem system;
    system.matrix = sparse_from_dense(Eigen::MatrixXd::Identity(3, 3));
    system.rhs = Eigen::Vector3d(1.0, -2.0, 3.0);
    const olm::SolveResult sol = olm::solve(system);
    CHECK((sol.x - system.rhs).norm() < 1e-14);
    CHECK(sol.residual < 1e-14);
  }
  {
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    olm::LinearSystem system;
    system.matrix = sparse_from_dense(a);
    system.rhs = Eigen::Vector2d(3.0, 3.0);
    const olm::SolveResult sol = olm::solve(system);
    CHECK((sol.x - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-13);
  }
}

TEST_CASE("condition number: diagonal examples") {
  CHECK(olm::condition_number(sparse_from_dense(Eigen::Vector3d(4, 2, 1).asDiagonal()),
                              Eigen::VectorXd()) == doctest::Approx(4.0));
  Eigen::VectorXd ns = Eigen::Vector3d(0, 1, 0);
  CHECK(olm::condition_number(sparse_from_dense(Eigen::Vector3d(3, 0, 1).asDiagonal()),
                              ns) == doctest::Approx(3.0));
  // an unexpected extra zero eigenvalue is an error
  CHECK_THROWS(olm::condition_number(
      sparse_from_dense(Eigen::Vector3d(3, 0, 0).asDiagonal()), ns));
  // non-symmetric input is rejected
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 1, 0, 1;
  CHECK_THROWS(olm::condition_number(sparse_from_dense(bad), Eigen::VectorXd()));
}

TEST_CASE("condition number: invariant under symmetric permutation") {
  oracle::Rng rng(23);
  const int n = 30;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 1.0 + 10.0 * rng.uniform();
    for (int j = 0; j < i; ++j)
      if (rng.uniform() < 0.2) a(i, j) = a(j, i) = rng.uniform() - 0.5;
  }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[static_cast<int>(rng.next() % (i + 1))]);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(perm[i], i) = 1.0;
  const Eigen::MatrixXd permuted = p * a * p.transpose();
  const double k1 = olm::condition_number(sparse_from_dense(a), Eigen::VectorXd());
  const double k2 = olm::condition_number(sparse_from_dense(permuted), Eigen::VectorXd());
  CHECK(k1 == doctest::Approx(k2).epsilon(1e-9));
}

TEST_CASE("generalized min singular value: identity examples") {
  const olm::SparseMat eye = sparse_from_dense(Eigen::MatrixXd::Identity(4, 4));
  CHECK(olm::generalized_min_singular(eye, eye) == doctest::Approx(1.0));
  CHECK(olm::generalized_min_singular(
            sparse_from_dense(Eigen::Vector2d(2, 1).asDiagonal()),
            sparse_from_dense(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(1.0));
  // indefinite m is rejected
  CHECK_THROWS(olm::generalized_min_singular(
      eye, sparse_from_dense(Eigen::Vector4d(1, -1, 1, 1).asDiagonal())));
}

TEST_CASE("solve: pinning a different pressure dof shifts pressure by a constant") {
  const olm::MeshPair pair = olm::condition_meshes(4, 2, 0.3);
  const olm::CutGeometry geom = olm::build_cut_geometry(pair.bg, pair.ov);
  const olm::CompositeStokesSpace space = olm::make_composite_space(pair.bg, pair.ov, geom);
  const olm::ManufacturedSolution ms = olm::sincos_solution();
  olm::StokesProblem problem;
  problem.f = ms.f;
  problem.g = ms.u;
  const olm::LinearSystem system = olm::assemble_system(space, geom, problem);

  const olm::SolveResult first = olm::solve(system);
  CHECK(first.pinned_dof == space.offset_p1);
  CHECK(first.x[first.pinned_dof] == 0.0);
  const olm::SolveResult second = olm::solve(system, space.p2_dof(1));
  CHECK(second.x[space.p2_dof(1)] == 0.0);

  double verr = 0.0;
  for (int g : space.velocity_dofs()) verr = std::max(verr, std::abs(first.x[g] - second.x[g]));
  CHECK(verr < 1e-8);

  const std::vector<int> pdofs = space.pressure_dofs();
  Eigen::VectorXd diff(pdofs.size());
  for (std::size_t i = 0; i < pdofs.size(); ++i) diff[i] = first.x[pdofs[i]] - second.x[pdofs[i]];
  const double mean = diff.mean();
  CHECK((diff.array() - mean).abs().maxCoeff() < 1e-8);
}

TEST_CASE("assembled coarse configuration has exactly one zero eigenvalue") {
  const olm::MeshPair pair = olm::condition_meshes(5, 3, 0.21);
  olm::StokesProblem problem;
  const olm::LinearSystem system = olm::assemble_system(pair.bg, pair.ov, problem);
  const olm::SparseMat reduced = olm::reduced_matrix(system);
  const olm::SpectrumReport report = olm::analyze_spectrum(reduced, 1);
  CHECK(report.n_zero == 1);
  CHECK(report.kappa > 1.0);
}

TEST_CASE("matrix market dump parses back") {
  Eigen::MatrixXd a(3, 3);
  a << 2, 0, -1, 0, 1.5, 0, -1, 0, 4;
  const olm::SparseMat m = sparse_from_dense(a);
  const std::string path = "dump_test.mtx";
  olm::write_matrix_market(m, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("MatrixMarket") != std::string::npos);
  int rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == 3);
  CHECK(cols == 3);
  CHECK(nnz == m.nonZeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
  for (int k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0.0;
    in >> i >> j >> v;
    back(i - 1, j - 1) = v;  // 1-based triples
  }
  CHECK((back - a).cwiseAbs().maxCoeff() < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("remove_dofs drops rows and columns") {
  Eigen::MatrixXd a(4, 4);
  a << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  const olm::SparseMat reduced = olm::remove_dofs(sparse_from_dense(a), {1, 3});
  const Eigen::MatrixXd d(reduced);
  REQUIRE(d.rows() == 2);
  CHECK(d(0, 0) == 1);
  CHECK(d(0, 1) == 3);
  CHECK(d(1, 0) == 3);
  CHECK(d(1, 1) == 8);
  const Eigen::VectorXd v = olm::remove_dofs(Eigen::Vector4d(1, 2, 3, 4), {1, 3});
  CHECK(v.size() == 2);
  CHECK(v[0] == 1);
  CHECK(v[1] == 3);
}
