#include "olm/experiments.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "olm/vtk.hpp"

namespace olm {

namespace {

constexpr double k_pi = 3.14159265358979323846;

double max_cell_diameter(const SimplicialMesh& mesh) {
  double h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) h = std::max(h, cell_diameter(mesh, c));
  return h;
}

double min_cell_diameter(const SimplicialMesh& mesh) {
  double h = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.n_cells(); ++c) h = std::min(h, cell_diameter(mesh, c));
  return h;
}

std::string ensure_output_dir(const std::string& dir) {
  const std::string out = dir.empty() ? std::string(".") : dir;
  std::filesystem::create_directories(out);
  return out;
}

StokesProblem problem_from(const ExperimentConfig& config, const ManufacturedSolution* ms) {
  StokesProblem problem;
  if (ms) {
    problem.f = ms->f;
    problem.g = ms->u;
  }
  problem.gamma = config.gamma;
  problem.delta = config.delta;
  problem.beta = config.beta;
  return problem;
}

struct AssembledCase {
  std::unique_ptr<MeshPair> meshes;  // stable addresses; the space points at them
  CutGeometry geom;
  CompositeStokesSpace space;
  LinearSystem system;

  const SimplicialMesh& bg() const { return meshes->bg; }
  const SimplicialMesh& ov() const { return meshes->ov; }
};

AssembledCase assemble_case(MeshPair meshes, const StokesProblem& problem, bool with_sh) {
  AssembledCase c;
  c.meshes = std::make_unique<MeshPair>(std::move(meshes));
  c.geom = build_cut_geometry(c.meshes->bg, c.meshes->ov);
  c.space = make_composite_space(c.meshes->bg, c.meshes->ov, c.geom);
  c.system = assemble_system(c.space, c.geom, problem, AssemblyOptions{with_sh});
  return c;
}

std::vector<int> sorted_constrained(const LinearSystem& system) {
  std::vector<int> dofs;
  for (const auto& [d, v] : system.constrained) dofs.push_back(d);
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

void write_solution_vtk(const std::string& path, const SimplicialMesh& mesh,
                        const ScalarP1Space& scalar, const Eigen::VectorXd& x,
                        int u_offset, int p_offset) {
  std::vector<Eigen::Vector2d> points(scalar.n_dofs);
  std::vector<Eigen::Vector2d> velocity(scalar.n_dofs);
  std::vector<double> pressure(scalar.n_dofs);
  for (int d = 0; d < scalar.n_dofs; ++d) {
    points[d] = mesh.vertices[scalar.dof_to_vertex[d]];
    velocity[d] = {x[u_offset + 2 * d], x[u_offset + 2 * d + 1]};
    pressure[d] = x[p_offset + d];
  }
  std::vector<Eigen::Vector3i> cells;
  cells.reserve(scalar.active_cells.size());
  for (int c : scalar.active_cells) {
    const Eigen::Vector3i& v = mesh.cells[c];
    cells.emplace_back(scalar.vertex_to_dof[v[0]], scalar.vertex_to_dof[v[1]],
                       scalar.vertex_to_dof[v[2]]);
  }
  write_vtk_fields(path, points, cells, velocity, pressure);
}

}  // namespace

ManufacturedSolution sincos_solution() {
  ManufacturedSolution ms;
  ms.u = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::sin(k_pi * x.y()), 0.0);
  };
  ms.grad_u = [](const Eigen::Vector2d& x) {
    Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
    j(0, 1) = k_pi * std::cos(k_pi * x.y());
    return j;
  };
  ms.p = [](const Eigen::Vector2d& x) { return std::cos(k_pi * x.x()) + 1.0; };
  ms.f = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(
        k_pi * k_pi * std::sin(k_pi * x.y()) - k_pi * std::sin(k_pi * x.x()), 0.0);
  };
  return ms;
}

ManufacturedSolution linear_patch_solution() {
  ManufacturedSolution ms;
  ms.u = [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), x.x()); };
  ms.grad_u = [](const Eigen::Vector2d&) {
    Eigen::Matrix2d j;
    j << 0, 1, 1, 0;
    return j;
  };
  ms.p = [](const Eigen::Vector2d& x) { return 2.0 * x.x() - 1.0; };
  ms.f = [](const Eigen::Vector2d&) { return Eigen::Vector2d(2.0, 0.0); };
  return ms;
}

void validate_config(const ExperimentConfig& config) {
  if (config.levels < 1) throw std::invalid_argument("config: levels must be >= 1");
  if (config.n < 1 || config.m < 1)
    throw std::invalid_argument("config: mesh subdivisions must be >= 1");
  for (double l : config.l_values)
    if (!(l > 0.2 && l < 0.5))
      throw std::invalid_argument("config: l values must lie in (0.2, 0.5)");
  if (!(config.gamma > 0) || !(config.delta > 0))
    throw std::invalid_argument("config: gamma and delta must be positive");
  if (config.beta != 1.0 && config.beta != -1.0)
    throw std::invalid_argument("config: beta must be in {-1, 1}");
}

MeshPair convergence_meshes(int level, double angle) {
  if (level < 0 || level > 12)
    throw std::invalid_argument("convergence_meshes: level out of range");
  const int n = 3 << level;
  const double lo = 0.3331, hi = 0.6669;
  const int m = std::max(1, static_cast<int>(std::lround((hi - lo) * n)));
  MeshPair pair;
  pair.bg = build_structured_square_mesh({0.0, 0.0}, {1.0, 1.0}, n, n);
  const SimplicialMesh inner = build_structured_square_mesh({lo, lo}, {hi, hi}, m, m);
  pair.ov = transform_mesh(inner, MeshTransform{angle, {0.5, 0.5}, {0.0, 0.0}});
  return pair;
}

MeshPair condition_meshes(int n, int m, double l) {
  MeshPair pair;
  pair.bg = build_structured_square_mesh({0.0, 0.0}, {1.0, 1.0}, n, n);
  pair.ov = build_structured_square_mesh({l, l}, {1.0 - l, 1.0 - l}, m, m);
  return pair;
}

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  validate_config(config);
  const ManufacturedSolution ms =
      config.patch_test ? linear_patch_solution() : sincos_solution();
  const StokesProblem problem = problem_from(config, &ms);

  ConvergenceResult result;
  std::vector<double> hs, e_u, e_p;
  for (int level = 0; level < config.levels; ++level) {
    AssembledCase c;
    SolveResult sol;
    try {
      c = assemble_case(convergence_meshes(level, config.angle), problem, config.with_sh);
      sol = solve(c.system);
    } catch (const std::exception& e) {
      throw std::runtime_error("convergence level " + std::to_string(level) + ": " +
                               e.what());
    }
    ErrorReport row;
    row.level = level;
    row.h_max = std::max(max_cell_diameter(c.bg()), max_cell_diameter(c.ov()));
    row.n_dofs = c.space.total_dofs;
    row.err_u_h1 = broken_h1_error(c.space, sol.x, ms.grad_u);
    row.err_u_l2 = velocity_l2_error(c.space, sol.x, ms.u);
    row.err_p_l2 = pressure_l2_error(c.space, c.geom, sol.x, ms.p);
    row.err_jump = interface_jump_norm(c.space, c.geom, sol.x, 0.5);
    result.rows.push_back(row);
    hs.push_back(row.h_max);
    e_u.push_back(row.err_u_h1);
    e_p.push_back(row.err_p_l2);
  }
  const bool fittable = result.rows.size() >= 2 &&
                        std::all_of(e_u.begin(), e_u.end(), [](double e) { return e > 0; }) &&
                        std::all_of(e_p.begin(), e_p.end(), [](double e) { return e > 0; });
  if (fittable) {
    result.slope_u_h1 = fit_rate(hs, e_u);
    result.slope_p_l2 = fit_rate(hs, e_p);
  }
  if (!config.output_dir.empty())
    write_convergence_csv(ensure_output_dir(config.output_dir) + "/convergence.csv", result);
  return result;
}

std::vector<ConditionRow> run_condition(const ExperimentConfig& config) {
  validate_config(config);
  const StokesProblem problem = problem_from(config, nullptr);
  const std::vector<std::pair<int, int>> pairs = {{config.n, config.m},
                                                  {2 * config.n, 2 * config.m}};
  std::vector<ConditionRow> rows;
  for (const auto& [n, m] : pairs) {
    for (bool with_sh : {true, false}) {
      for (double l : config.l_values) {
        const AssembledCase c = assemble_case(condition_meshes(n, m, l), problem, with_sh);
        const SparseMat reduced = reduced_matrix(c.system);
        const double kappa = condition_number(reduced, reduced_nullspace(c.system));
        const double h = min_cell_diameter(c.ov());
        rows.push_back({l, n, m, with_sh, kappa, kappa * h * h});
      }
    }
  }
  if (!config.output_dir.empty())
    write_condition_csv(ensure_output_dir(config.output_dir) + "/condition.csv", rows);
  return rows;
}

std::vector<InfSupRow> run_infsup(const ExperimentConfig& config) {
  validate_config(config);
  const StokesProblem problem = problem_from(config, nullptr);
  std::vector<InfSupRow> rows;
  for (bool with_sh : {true, false}) {
    for (double l : config.l_values) {
      const AssembledCase c =
          assemble_case(condition_meshes(config.n, config.m, l), problem, with_sh);
      const std::vector<int> fixed = sorted_constrained(c.system);
      const SparseMat a = remove_dofs(c.system.matrix, fixed);
      const SparseMat gram = remove_dofs(build_norm_gram(c.space, c.geom), fixed);
      rows.push_back({l, with_sh, generalized_min_singular(a, gram)});
    }
  }
  if (!config.output_dir.empty())
    write_infsup_csv(ensure_output_dir(config.output_dir) + "/infsup.csv", rows);
  return rows;
}

SolveSummary run_solve(const ExperimentConfig& config) {
  validate_config(config);
  const ManufacturedSolution ms =
      config.patch_test ? linear_patch_solution() : sincos_solution();
  const StokesProblem problem = problem_from(config, &ms);

  MeshPair meshes;
  meshes.bg = build_structured_square_mesh({0.0, 0.0}, {1.0, 1.0}, config.n, config.n);
  const SimplicialMesh inner =
      build_structured_square_mesh({0.3331, 0.3331}, {0.6669, 0.6669}, config.m, config.m);
  meshes.ov = transform_mesh(inner, MeshTransform{config.angle, {0.5, 0.5}, {0.0, 0.0}});

  const AssembledCase c = assemble_case(std::move(meshes), problem, config.with_sh);
  const SolveResult sol = solve(c.system);

  SolveSummary summary;
  summary.n_dofs = c.space.total_dofs;
  summary.residual = sol.residual;

  const std::string out = ensure_output_dir(config.output_dir);
  if (config.dump_matrix) write_matrix_market(c.system.matrix, out + "/matrix.mtx");
  if (config.dump_geometry)
    dump_geometry_csv(c.geom, out + "/geometry_pieces.csv", out + "/geometry_segments.csv");
  if (config.compute_kappa)
    summary.kappa = condition_number(reduced_matrix(c.system), reduced_nullspace(c.system));

  summary.bg_vtk = out + "/solution_background.vtk";
  summary.ov_vtk = out + "/solution_overlap.vtk";
  write_solution_vtk(summary.bg_vtk, c.bg(), c.space.bg_scalar, sol.x,
                     c.space.offset_u1, c.space.offset_p1);
  write_solution_vtk(summary.ov_vtk, c.ov(), c.space.ov_scalar, sol.x,
                     c.space.offset_u2, c.space.offset_p2);

  double err = 0.0;
  for (int d = 0; d < c.space.bg_scalar.n_dofs; ++d) {
    const Eigen::Vector2d u = ms.u(c.bg().vertices[c.space.bg_scalar.dof_to_vertex[d]]);
    err = std::max(err, std::abs(sol.x[c.space.u1_dof(d, 0)] - u[0]));
    err = std::max(err, std::abs(sol.x[c.space.u1_dof(d, 1)] - u[1]));
  }
  for (int d = 0; d < c.space.ov_scalar.n_dofs; ++d) {
    const Eigen::Vector2d u = ms.u(c.ov().vertices[c.space.ov_scalar.dof_to_vertex[d]]);
    err = std::max(err, std::abs(sol.x[c.space.u2_dof(d, 0)] - u[0]));
    err = std::max(err, std::abs(sol.x[c.space.u2_dof(d, 1)] - u[1]));
  }
  summary.max_nodal_velocity_error = err;
  return summary;
}

void write_convergence_csv(const std::string& path, const ConvergenceResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out.precision(12);
  out << "level,h_max,ndofs,err_u_h1,err_u_l2,err_p_l2,err_jump\n";
  for (const ErrorReport& r : result.rows)
    out << r.level << ',' << r.h_max << ',' << r.n_dofs << ',' << r.err_u_h1 << ','
        << r.err_u_l2 << ',' << r.err_p_l2 << ',' << r.err_jump << '\n';
  out << "# slope_u_h1=" << result.slope_u_h1 << " slope_p_l2=" << result.slope_p_l2
      << '\n';
}

void write_condition_csv(const std::string& path, const std::vector<ConditionRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out.precision(12);
  out << "l,N,M,with_sh,kappa,kappa_h2\n";
  for (const ConditionRow& r : rows)
    out << r.l << ',' << r.n << ',' << r.m << ',' << (r.with_sh ? 1 : 0) << ',' << r.kappa
        << ',' << r.kappa_h2 << '\n';
}

void write_infsup_csv(const std::string& path, const std::vector<InfSupRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out.precision(12);
  out << "l,with_sh,c_infsup\n";
  for (const InfSupRow& r : rows)
    out << r.l << ',' << (r.with_sh ? 1 : 0) << ',' << r.c_infsup << '\n';
}

void dump_geometry_csv(const CutGeometry& geom, const std::string& pieces_path,
                       const std::string& segments_path) {
  std::ofstream pieces(pieces_path);
  if (!pieces) throw std::runtime_error("cannot write csv: " + pieces_path);
  pieces.precision(17);
  pieces << "piece,bg_cell,ov_cell,vertex,x,y\n";
  for (std::size_t i = 0; i < geom.overlap_pieces.size(); ++i) {
    const OverlapPiece& p = geom.overlap_pieces[i];
    for (std::size_t v = 0; v < p.polygon.vertices.size(); ++v)
      pieces << i << ',' << p.bg_cell << ',' << p.ov_cell << ',' << v << ','
             << p.polygon.vertices[v].x() << ',' << p.polygon.vertices[v].y() << '\n';
  }
  std::ofstream segments(segments_path);
  if (!segments) throw std::runtime_error("cannot write csv: " + segments_path);
  segments.precision(17);
  segments << "segment,bg_cell,ov_cell,ov_facet,ax,ay,bx,by,nx,ny,h_penalty\n";
  for (std::size_t i = 0; i < geom.interface_segments.size(); ++i) {
    const InterfaceSegment& s = geom.interface_segments[i];
    segments << i << ',' << s.bg_cell << ',' << s.ov_cell << ',' << s.ov_facet << ','
             << s.a.x() << ',' << s.a.y() << ',' << s.b.x() << ',' << s.b.y() << ','
             << s.normal.x() << ',' << s.normal.y() << ',' << s.h_penalty << '\n';
  }
}

}  // namespace olm
