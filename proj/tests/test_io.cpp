#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "olm/experiments.hpp"
#include "olm/vtk.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// minimal legacy-VTK structure check
void validate_vtk(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 2.0");
  std::getline(in, line);  // title
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET UNSTRUCTURED_GRID");
  std::string word;
  int n_points = 0;
  in >> word >> n_points;
  CHECK(word == "POINTS");
  CHECK(n_points > 0);
  in >> word;  // double
  for (int i = 0; i < 3 * n_points; ++i) {
    double v;
    REQUIRE((in >> v));
  }
  int n_cells = 0, list_len = 0;
  in >> word >> n_cells >> list_len;
  CHECK(word == "CELLS");
  CHECK(list_len == 4 * n_cells);
  for (int c = 0; c < n_cells; ++c) {
    int k, a, b, d;
    REQUIRE((in >> k >> a >> b >> d));
    CHECK(k == 3);
    CHECK(a >= 0);
    CHECK(a < n_points);
    CHECK(b < n_points);
    CHECK(d < n_points);
  }
  int n_types = 0;
  in >> word >> n_types;
  CHECK(word == "CELL_TYPES");
  CHECK(n_types == n_cells);
  for (int c = 0; c < n_cells; ++c) {
    int t;
    REQUIRE((in >> t));
    CHECK(t == 5);  // triangle
  }
  int n_data = 0;
  in >> word >> n_data;
  CHECK(word == "POINT_DATA");
  CHECK(n_data == n_points);
  std::string name, type;
  in >> word >> name >> type;
  CHECK(word == "VECTORS");
  CHECK(name == "velocity");
  for (int i = 0; i < 3 * n_points; ++i) {
    double v;
    REQUIRE((in >> v));
  }
  int comps = 0;
  in >> word >> name >> type >> comps;
  CHECK(word == "SCALARS");
  CHECK(name == "pressure");
  CHECK(comps == 1);
  in >> word >> name;
  CHECK(word == "LOOKUP_TABLE");
  for (int i = 0; i < n_points; ++i) {
    double v;
    REQUIRE((in >> v));
  }
}

}  // namespace

TEST_CASE("convergence run in patch mode: tiny errors, deterministic csv") {
  olm::ExperimentConfig config;
  config.levels = 2;
  config.patch_test = true;
  config.output_dir = "io_test_out";
  const olm::ConvergenceResult first = olm::run_convergence(config);
  REQUIRE(first.rows.size() == 2);
  for (const olm::ErrorReport& r : first.rows) {
    CHECK(r.err_u_h1 < 1e-9);
    CHECK(r.err_u_l2 < 1e-9);
    CHECK(r.err_p_l2 < 1e-9);
    CHECK(r.err_jump < 1e-9);
    CHECK(r.n_dofs > 0);
  }
  const std::string csv1 = slurp("io_test_out/convergence.csv");
  olm::run_convergence(config);
  CHECK(csv1 == slurp("io_test_out/convergence.csv"));  // bitwise identical

  std::istringstream in(csv1);
  std::string header;
  std::getline(in, header);
  CHECK(header == "level,h_max,ndofs,err_u_h1,err_u_l2,err_p_l2,err_jump");
  std::string line, last;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
    last = line;
  }
  CHECK(rows == 2);
  CHECK(last.rfind("# slope_u_h1=", 0) == 0);
  CHECK(last.find("slope_p_l2=") != std::string::npos);
  std::filesystem::remove_all("io_test_out");
}

TEST_CASE("condition run: csv shape and sane values") {
  olm::ExperimentConfig config;
  config.n = 5;
  config.m = 3;
  config.l_values = {0.21};
  config.output_dir = "io_test_cond";
  const std::vector<olm::ConditionRow> rows = olm::run_condition(config);
  REQUIRE(rows.size() == 4);  // two resolutions x with/without s_h
  for (const olm::ConditionRow& r : rows) {
    CHECK(r.kappa > 1.0);
    CHECK(r.kappa_h2 > 0.0);
  }
  std::istringstream in(slurp("io_test_cond/condition.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "l,N,M,with_sh,kappa,kappa_h2");
  std::filesystem::remove_all("io_test_cond");
}

TEST_CASE("infsup run: csv shape") {
  olm::ExperimentConfig config;
  config.n = 4;
  config.m = 2;
  config.l_values = {0.25};
  config.output_dir = "io_test_infsup";
  const std::vector<olm::InfSupRow> rows = olm::run_infsup(config);
  REQUIRE(rows.size() == 2);
  for (const olm::InfSupRow& r : rows) CHECK(r.c_infsup > 0.0);
  std::istringstream in(slurp("io_test_infsup/infsup.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "l,with_sh,c_infsup");
  std::filesystem::remove_all("io_test_infsup");
}

TEST_CASE("solve run: vtk output validates, patch solution exact at nodes") {
  olm::ExperimentConfig config;
  config.n = 4;
  config.m = 1;
  config.angle = 0.35;
  config.patch_test = true;
  config.dump_matrix = true;
  config.dump_geometry = true;
  config.output_dir = "io_test_solve";
  const olm::SolveSummary summary = olm::run_solve(config);
  CHECK(summary.residual < 1e-10);
  CHECK(summary.max_nodal_velocity_error < 1e-9);
  validate_vtk(summary.bg_vtk);
  validate_vtk(summary.ov_vtk);
  CHECK(std::filesystem::exists("io_test_solve/matrix.mtx"));
  CHECK(std::filesystem::exists("io_test_solve/geometry_pieces.csv"));
  CHECK(std::filesystem::exists("io_test_solve/geometry_segments.csv"));
  std::filesystem::remove_all("io_test_solve");
}

TEST_CASE("infsup run: constant collapses near the limit without s_h") {
  olm::ExperimentConfig config;
  config.n = 5;
  config.m = 3;
  config.l_values = {0.21, 0.200001};
  const std::vector<olm::InfSupRow> rows = olm::run_infsup(config);
  double with_far = 0, with_near = 0, without_far = 0, without_near = 0;
  for (const olm::InfSupRow& r : rows) {
    (r.with_sh ? (r.l > 0.205 ? with_far : with_near)
               : (r.l > 0.205 ? without_far : without_near)) = r.c_infsup;
  }
  CHECK(with_near > 0.5 * with_far);              // stable with the overlap term
  CHECK(without_near < 0.1 * without_far);        // degenerates without it
}

TEST_CASE("config validation") {
  olm::ExperimentConfig config;
  config.levels = 0;
  CHECK_THROWS(olm::validate_config(config));
  config.levels = 1;
  config.l_values = {0.15};
  CHECK_THROWS(olm::validate_config(config));
  config.l_values = {0.25};
  config.gamma = 0.0;
  CHECK_THROWS(olm::validate_config(config));
  config.gamma = 10.0;
  config.beta = 2.0;
  CHECK_THROWS(olm::validate_config(config));
}
