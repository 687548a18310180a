#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsl/errors.hpp"
#include "qsl/experiments.hpp"

using namespace qsl;
namespace fs = std::filesystem;

namespace {

RunConfig small(const std::string& name) {
  RunConfig c = preset(name);
  c.grid_n = 64;
  c.steps = 100;
  c.out_dir = (fs::temp_directory_path() / ("qsl_exp_" + name)).string();
  fs::remove_all(c.out_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("constant protocol is stationary") {
  const Fig1Run run = run_fig1_tau(small("constant"), 1.0);
  CHECK(run.stationary);
  CHECK(run.v_qsl.max() < 1e-6);
  CHECK(run.v_qsl_w.max() < 1e-6);
  CHECK(run.checks.passed());
}

TEST_CASE("fig1 files and determinism") {
  RunConfig c = small("fig1-tau0.1");
  const RunOutcome a = execute_fig1(c);
  CHECK(a.exit_code == kExitOk);
  const fs::path csv = fs::path(c.out_dir) / "fig1_tau0.1.csv";
  REQUIRE(fs::exists(csv));
  CHECK(first_line(csv) ==
        "t,v_qsl_p1,v_qsl_w_p1,v_qsl_p1_norm,v_qsl_w_p1_norm,l1_dist,wasserstein1_dist,fidelity,bures_angle");
  CHECK(line_count(csv) == c.steps + 2);
  CHECK(fs::exists(fs::path(c.out_dir) / "config.json"));
  CHECK(fs::exists(fs::path(c.out_dir) / "summary.json"));
  const std::string first = slurp(csv);
  execute_fig1(c);
  CHECK(slurp(csv) == first);

  const RunOutcome check = execute_check(c.out_dir);
  CHECK(check.exit_code == kExitOk);
}

TEST_CASE("series file round trip") {
  RunConfig c = small("fig1-tau1");
  c.steps = 50;
  c.ode_substeps = 4;
  const Fig1Run run = run_fig1_tau(c, 1.0);
  execute_fig1(c);
  const RunSeries back = read_series_csv(fs::path(c.out_dir) / "fig1_tau1_series.csv");
  REQUIRE(back.times.size() == run.series.times.size());
  CHECK(back.norms == run.series.norms);
  CHECK(back.kernel_speed == run.series.kernel_speed);
  CHECK(back.wigner_distance == run.series.wigner_distance);
  CHECK(back.fidelity == run.series.fidelity);
}

TEST_CASE("check flags tampered output") {
  RunConfig c = small("fig1-tau1");
  execute_fig1(c);
  const fs::path series = fs::path(c.out_dir) / "fig1_tau1_series.csv";
  // halve the p=1 phase-space speed column
  std::ifstream in(series);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  in.close();
  std::vector<std::string> names;
  {
    std::stringstream hs(header);
    for (std::string h; std::getline(hs, h, ',');) names.push_back(h);
  }
  const auto col = static_cast<std::size_t>(std::find(names.begin(), names.end(), "vw_p1") - names.begin());
  std::ofstream out(series);
  out << header << '\n';
  for (const auto& line : lines) {
    std::stringstream ls(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    cells[col] = std::to_string(0.5 * std::stod(cells[col]));
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  }
  out.close();
  CHECK(execute_check(c.out_dir).exit_code == kExitCheckFailed);
  CHECK_THROWS_AS(execute_check(fs::temp_directory_path() / "qsl_no_such_dir"), IoError);
}

TEST_CASE("fig2 at low resolution") {
  RunConfig c = small("fig2");
  c.grid_n = 96;
  c.steps = 40;
  const RunOutcome out = execute_fig2(c);
  CHECK(out.exit_code == kExitOk);
  const fs::path csv = fs::path(c.out_dir) / "fig2.csv";
  CHECK(first_line(csv) == "t,v_qsl_w_p1,wasserstein1_dist,norm_check");
  CHECK(line_count(csv) == c.steps + 2);
  CHECK(out.summary["max_norm_drift"].get<double>() < 1e-10);
}

TEST_CASE("fig2 refuses invalid temperatures") {
  RunConfig c = small("fig2");
  c.qbm_beta = 10.0;
  CHECK_THROWS_AS(run_fig2_beta(c, 10.0), DomainError);
}

TEST_CASE("sweep backends agree where both apply") {
  RunConfig c = small("beta-sweep");
  c.grid_n = 128;
  c.steps = 200;
  const SweepRow g = sweep_point_gaussian(c, 1.0);
  const SweepRow f = sweep_point_fd(c, 1.0);
  CHECK(f.tau_qsl_w == doctest::Approx(g.tau_qsl_w).epsilon(5e-3));
  CHECK(f.final_distance == doctest::Approx(g.final_distance).epsilon(5e-3));
}

TEST_CASE("sweep output and refusal") {
  RunConfig c = small("beta-sweep");
  const RunOutcome out = execute_sweep(c);
  CHECK(out.exit_code == kExitNumerical);
  CHECK(out.summary["refused"].size() == 1);
  const fs::path csv = fs::path(c.out_dir) / "sweep_beta.csv";
  CHECK(first_line(csv) == "beta,tau_qsl_w,mean_speed,final_distance");
  CHECK(line_count(csv) == 5);
  c.qbm_betas = {0.1, 1.0};
  const RunOutcome ok = execute_sweep(c);
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.summary["monotone_in_beta"].get<bool>());
}
