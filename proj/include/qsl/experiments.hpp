#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsl/config.hpp"
#include "qsl/speed.hpp"

namespace qsl {

/// One driven-oscillator quench, both representations.
struct Fig1Run {
  double tau = 0.0;
  RunSeries series;
  SpeedSeries v_qsl;      ///< p = 1, operator space
  SpeedSeries v_qsl_w;    ///< p = 1, phase space
  SpeedSeries v_qsl_norm;
  SpeedSeries v_qsl_w_norm;
  std::vector<double> bures_angle;
  bool stationary = false;
  double max_normalized_deviation = 0.0;
  double argmax_time_kernel = 0.0;
  double argmax_time_wigner = 0.0;
  double tau_qsl_w = 0.0;
  double max_trace_drift = 0.0;
  double max_wigner_norm_drift = 0.0;
  CheckReport checks;
};

/// Open-system run from the Gaussian initial state at one beta.
struct Fig2Run {
  double beta = 0.0;
  double dt_used = 0.0;
  RunSeries series;
  SpeedSeries v_qsl_w;  ///< p = 1
  std::vector<double> norm_check;
  double max_norm_drift = 0.0;
  double tau_qsl_w = 0.0;
  CheckReport checks;
};

struct SweepRow {
  double beta = 0.0;
  double tau_qsl_w = 0.0;
  double mean_speed = 0.0;
  double final_distance = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::pair<double, std::string>> refused;  ///< beta, reason
  bool monotone = false;  ///< tau_qsl_w strictly increasing in beta over the rows
};

/// Exponents evaluated in a run: the configured ones plus p = 1.
std::vector<PNorm> run_norms(const RunConfig& config);

Fig1Run run_fig1_tau(const RunConfig& config, double tau);
Fig2Run run_fig2_beta(const RunConfig& config, double beta);

/// tau_qsl_w at one beta from the exact Gaussian moment evolution.
SweepRow sweep_point_gaussian(const RunConfig& config, double beta);
/// Same quantity from the finite-difference solver on the configured grid.
SweepRow sweep_point_fd(const RunConfig& config, double beta);
SweepResult run_beta_sweep(const RunConfig& config);

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitCheckFailed = 4 };

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json summary;
};

/// Run, write CSV/summary/config echo under config.out_dir. The optional
/// pointer receives the in-memory results.
RunOutcome execute_fig1(const RunConfig& config, std::vector<Fig1Run>* runs = nullptr);
RunOutcome execute_fig2(const RunConfig& config, Fig2Run* run = nullptr);
RunOutcome execute_sweep(const RunConfig& config, SweepResult* result = nullptr);
/// Re-runs the inequality suite over every *_series.csv in dir.
RunOutcome execute_check(const std::filesystem::path& dir);

std::string fig1_file_name(const RunConfig& config, double tau);

/// Reads a series CSV written by a run back into a RunSeries.
RunSeries read_series_csv(const std::filesystem::path& path);

/// Applies QSL_NUM_THREADS if set.
void configure_threads_from_env();

}  // namespace qsl
