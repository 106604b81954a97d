// olm-stokes: batch experiment driver for the overlapping-mesh Stokes solver.
#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "olm/experiments.hpp"

namespace {

void add_common_options(CLI::App* cmd, olm::ExperimentConfig& config) {
  cmd->add_option("--levels", config.levels, "number of refinement levels");
  cmd->add_option("--n", config.n, "background mesh subdivisions");
  cmd->add_option("--m", config.m, "overlapping mesh subdivisions");
  cmd->add_option("--l", config.l_values, "inner-box parameters, comma separated")
      ->delimiter(',');
  cmd->add_option("--angle", config.angle, "rotation of the overlapping mesh [rad]");
  cmd->add_option("--gamma", config.gamma, "Nitsche penalty");
  cmd->add_option("--delta", config.delta, "least-squares stabilization weight");
  cmd->add_option("--beta", config.beta, "pressure-test sign, -1 or 1");
  cmd->add_flag_callback("--no-sh", [&config] { config.with_sh = false; },
                         "omit the overlap stabilization term");
  cmd->add_option("--out", config.output_dir, "output directory");
  cmd->add_option("--seed", config.seed, "seed for randomized checks");
  cmd->add_flag("--patch-test", config.patch_test,
                "use the exact linear solution instead of the manufactured one");
  cmd->add_flag("--kappa", config.compute_kappa, "also report the condition number");
  cmd->add_flag("--dump-matrix", config.dump_matrix, "write the assembled matrix");
  cmd->add_flag("--dump-geometry", config.dump_geometry, "write the cut-geometry tables");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes solver on a pair of overlapping non-matching meshes"};
  app.require_subcommand(1);

  olm::ExperimentConfig config;
  CLI::App* convergence = app.add_subcommand(
      "convergence", "manufactured-solution refinement study with fitted slopes");
  CLI::App* condition =
      app.add_subcommand("condition", "condition-number sweep over interface positions");
  CLI::App* infsup =
      app.add_subcommand("infsup", "numerical inf-sup constants over interface positions");
  CLI::App* solve = app.add_subcommand("solve", "single solve with VTK field output");
  for (CLI::App* cmd : {convergence, condition, infsup, solve})
    add_common_options(cmd, config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (config.output_dir.empty()) config.output_dir = ".";
    if (convergence->parsed()) {
      const olm::ConvergenceResult result = olm::run_convergence(config);
      std::printf("level  h_max        ndofs   err_u_h1      err_u_l2      err_p_l2      err_jump\n");
      for (const olm::ErrorReport& r : result.rows)
        std::printf("%-6d %-12.5g %-7d %-13.6g %-13.6g %-13.6g %-13.6g\n", r.level,
                    r.h_max, r.n_dofs, r.err_u_h1, r.err_u_l2, r.err_p_l2, r.err_jump);
      std::printf("slope_u_h1=%.4g slope_p_l2=%.4g\n", result.slope_u_h1,
                  result.slope_p_l2);
      std::printf("wrote %s/convergence.csv\n", config.output_dir.c_str());
    } else if (condition->parsed()) {
      const auto rows = olm::run_condition(config);
      std::printf("l          N    M    with_sh  kappa         kappa_h2\n");
      for (const olm::ConditionRow& r : rows)
        std::printf("%-10.6g %-4d %-4d %-8d %-13.6g %-13.6g\n", r.l, r.n, r.m,
                    r.with_sh ? 1 : 0, r.kappa, r.kappa_h2);
      std::printf("wrote %s/condition.csv\n", config.output_dir.c_str());
    } else if (infsup->parsed()) {
      const auto rows = olm::run_infsup(config);
      std::printf("l          with_sh  c_infsup\n");
      for (const olm::InfSupRow& r : rows)
        std::printf("%-10.6g %-8d %-13.6g\n", r.l, r.with_sh ? 1 : 0, r.c_infsup);
      std::printf("wrote %s/infsup.csv\n", config.output_dir.c_str());
    } else if (solve->parsed()) {
      const olm::SolveSummary summary = olm::run_solve(config);
      std::printf("dofs=%d residual=%.3g", summary.n_dofs, summary.residual);
      if (config.compute_kappa) std::printf(" kappa=%.6g", summary.kappa);
      std::printf("\nwrote %s and %s\n", summary.bg_vtk.c_str(), summary.ov_vtk.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
