#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <memory>

#include "olm/analysis.hpp"
#include "olm/experiments.hpp"
#include "olm/linalg.hpp"
#include "oracles.hpp"

using Eigen::Vector2d;

namespace {

struct Discretization {
  std::unique_ptr<olm::MeshPair> meshes;
  olm::CutGeometry geom;
  olm::CompositeStokesSpace space;

  explicit Discretization(olm::MeshPair pair)
      : meshes(std::make_unique<olm::MeshPair>(std::move(pair))),
        geom(olm::build_cut_geometry(meshes->bg, meshes->ov)),
        space(olm::make_composite_space(meshes->bg, meshes->ov, geom)) {}
};

double active_area(const olm::CompositeStokesSpace& space) {
  double a = 0.0;
  for (int c : space.bg_scalar.active_cells) a += olm::cell_area(*space.bg, c);
  for (int c = 0; c < space.ov->n_cells(); ++c) a += olm::cell_area(*space.ov, c);
  return a;
}

}  // namespace

TEST_CASE("broken H1 and L2 errors vanish on interpolated linears") {
  const Discretization d(olm::condition_meshes(4, 2, 0.25));
  const olm::ManufacturedSolution ms = olm::linear_patch_solution();
  const Eigen::VectorXd x = oracle::interpolate(d.space, ms.u, ms.p);
  CHECK(olm::broken_h1_error(d.space, x, ms.grad_u) < 1e-12);
  CHECK(olm::velocity_l2_error(d.space, x, ms.u) < 1e-12);
  CHECK(olm::pressure_l2_error(d.space, d.geom, x, ms.p) < 1e-12);
  CHECK(olm::interface_jump_norm(d.space, d.geom, x, 0.5) < 1e-12);
}

TEST_CASE("broken H1 error of the zero field is the exact-field norm") {
  // T1* covers [0,1]^2 \ [0.3,0.7]^2 and the overlapping mesh covers
  // [0.25,0.75]^2; the integrals below follow piecewise in closed form.
  const Discretization d(olm::condition_meshes(10, 5, 0.25));
  CHECK(d.geom.classification.fully_overlapped.size() == 32);
  const olm::ManufacturedSolution ms = olm::sincos_solution();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.space.total_dofs);

  auto strip = [](double a, double b) {  // ∫_a^b pi^2 cos^2(pi y) dy
    const double pi = M_PI;
    return pi * pi * (0.5 * (b - a) + (std::sin(2 * pi * b) - std::sin(2 * pi * a)) / (4 * pi));
  };
  const double on_unit = strip(0.0, 1.0);
  const double on_hole = 0.4 * strip(0.3, 0.7);
  const double on_inner = 0.5 * strip(0.25, 0.75);
  const double want = std::sqrt(on_unit - on_hole + on_inner);
  CHECK(olm::broken_h1_error(d.space, zero, ms.grad_u) ==
        doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("interpolation error roughly halves under refinement") {
  const olm::ManufacturedSolution ms = olm::sincos_solution();
  double coarse = 0.0, fine = 0.0;
  {
    const Discretization d(olm::condition_meshes(8, 4, 0.25));
    coarse = olm::broken_h1_error(d.space, oracle::interpolate(d.space, ms.u, ms.p), ms.grad_u);
  }
  {
    const Discretization d(olm::condition_meshes(16, 8, 0.25));
    fine = olm::broken_h1_error(d.space, oracle::interpolate(d.space, ms.u, ms.p), ms.grad_u);
  }
  CHECK(coarse / fine > 1.7);
  CHECK(coarse / fine < 2.3);
}

TEST_CASE("pressure error ignores constant shifts") {
  const Discretization d(olm::condition_meshes(4, 2, 0.3));
  const olm::ScalarField p_exact = [](const Vector2d& p) { return p.x() - 0.5; };
  Eigen::VectorXd x = oracle::interpolate(
      d.space, nullptr, [&](const Vector2d& p) { return p_exact(p) + 5.0; });
  CHECK(olm::pressure_l2_error(d.space, d.geom, x, p_exact) < 1e-12);
}

TEST_CASE("interface jump norm of a constant jump") {
  const Discretization d(olm::condition_meshes(2, 1, 0.25));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d.space.total_dofs);
  for (int s = 0; s < d.space.ov_scalar.n_dofs; ++s) x[d.space.u2_dof(s, 0)] = 1.0;
  const double perimeter = olm::boundary_perimeter(d.meshes->ov);
  const double h = olm::cell_diameter(d.meshes->ov, 0);  // both cells congruent
  CHECK(olm::interface_jump_norm(d.space, d.geom, x, 0.5) ==
        doctest::Approx(std::sqrt(perimeter / h)).epsilon(1e-12));
  CHECK(olm::interface_jump_norm(d.space, d.geom, x, -0.5) ==
        doctest::Approx(std::sqrt(perimeter * h)).epsilon(1e-12));
}

TEST_CASE("fit_rate") {
  CHECK(olm::fit_rate({0.5, 0.25, 0.125}, {0.5, 0.25, 0.125}) == doctest::Approx(1.0));
  CHECK(olm::fit_rate({0.5, 0.25, 0.125}, {3 * 0.25, 3 * 0.0625, 3 * 0.015625}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  oracle::Rng rng(31);
  std::vector<double> h, e;
  for (int i = 0; i < 6; ++i) {
    h.push_back(std::pow(0.5, i));
    e.push_back(h.back() * (1.0 + 0.05 * (2.0 * rng.uniform() - 1.0)));
  }
  const double slope = olm::fit_rate(h, e);
  CHECK(slope > 0.9);
  CHECK(slope < 1.1);

  CHECK_THROWS(olm::fit_rate({0.5}, {0.5}));
  CHECK_THROWS(olm::fit_rate({0.5, -0.25}, {0.5, 0.25}));
  CHECK_THROWS(olm::fit_rate({0.5, 0.25}, {0.5, 0.0}));
  CHECK_THROWS(olm::fit_rate({0.5, 0.5}, {0.5, 0.25}));
}

TEST_CASE("norm gram: closed forms and positivity") {
  const Discretization d(olm::condition_meshes(4, 2, 0.3));
  const olm::SparseMat gram = olm::build_norm_gram(d.space, d.geom);
  CHECK((Eigen::MatrixXd(gram) - Eigen::MatrixXd(gram).transpose()).cwiseAbs().maxCoeff() <
        1e-12);

  // constant pressure: energy is the active area of both meshes
  Eigen::VectorXd q = Eigen::VectorXd::Zero(d.space.total_dofs);
  for (int g : d.space.pressure_dofs()) q[g] = 1.0;
  CHECK(q.dot(gram * q) == doctest::Approx(active_area(d.space)).epsilon(1e-11));

  // interpolated linear velocity: gradient term over full cells plus the
  // normal-derivative term; the jump term vanishes
  const olm::ManufacturedSolution ms = olm::linear_patch_solution();
  const Eigen::VectorXd v = oracle::interpolate(d.space, ms.u, nullptr);
  double dn_term = 0.0;
  for (const olm::InterfaceSegment& seg : d.geom.interface_segments) {
    const Eigen::Matrix2d j = ms.grad_u(seg.midpoint());
    dn_term += seg.h_penalty * (j * seg.normal).squaredNorm() * seg.length();
  }
  const double want = 2.0 * active_area(d.space) + dn_term;
  CHECK(v.dot(gram * v) == doctest::Approx(want).epsilon(1e-11));

  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                 Eigen::MatrixXd(gram), Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  CHECK(ev.minCoeff() > -1e-10);

  // positive definite once the Dirichlet velocity dofs are removed
  olm::StokesProblem problem;
  const olm::LinearSystem system = olm::assemble_system(d.space, d.geom, problem);
  std::vector<int> fixed;
  for (const auto& [dof, value] : system.constrained) fixed.push_back(dof);
  std::sort(fixed.begin(), fixed.end());
  const olm::SparseMat reduced = olm::remove_dofs(gram, fixed);
  const Eigen::VectorXd rev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                  Eigen::MatrixXd(reduced), Eigen::EigenvaluesOnly)
                                  .eigenvalues();
  CHECK(rev.minCoeff() > 0.0);
}

TEST_CASE("norm consistency: gram gradient block matches broken_h1_error") {
  const Discretization d(olm::condition_meshes(4, 2, 0.3));
  const olm::NormGramBlocks blocks = olm::norm_gram_blocks(d.space, d.geom);
  const olm::ManufacturedSolution ms = olm::sincos_solution();
  const Eigen::VectorXd x = oracle::interpolate(d.space, ms.u, nullptr);

  double grad_energy = 0.0;
  for (const auto& t : blocks.grad_velocity)
    grad_energy += t.value() * x[t.row()] * x[t.col()];
  const olm::MatrixField zero_grad = [](const Vector2d&) {
    return Eigen::Matrix2d::Zero().eval();
  };
  const double err = olm::broken_h1_error(d.space, x, zero_grad);
  CHECK(std::sqrt(grad_energy) == doctest::Approx(err).epsilon(1e-10));
}

TEST_CASE("norms are absolutely homogeneous") {
  const Discretization d(olm::condition_meshes(4, 2, 0.3));
  const olm::ManufacturedSolution ms = olm::sincos_solution();
  const Eigen::VectorXd x = oracle::interpolate(d.space, ms.u, ms.p);
  const double s = -3.7;
  const olm::MatrixField zero_grad = [](const Vector2d&) {
    return Eigen::Matrix2d::Zero().eval();
  };
  const olm::VectorField zero_u = [](const Vector2d&) {
    return Eigen::Vector2d::Zero().eval();
  };
  CHECK(olm::broken_h1_error(d.space, s * x, zero_grad) ==
        doctest::Approx(std::abs(s) * olm::broken_h1_error(d.space, x, zero_grad))
            .epsilon(1e-12));
  CHECK(olm::velocity_l2_error(d.space, s * x, zero_u) ==
        doctest::Approx(std::abs(s) * olm::velocity_l2_error(d.space, x, zero_u))
            .epsilon(1e-12));
  CHECK(olm::interface_jump_norm(d.space, d.geom, s * x, 0.5) ==
        doctest::Approx(std::abs(s) * olm::interface_jump_norm(d.space, d.geom, x, 0.5))
            .epsilon(1e-12));
}
