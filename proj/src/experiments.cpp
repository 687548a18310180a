#include "qsl/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>

#ifdef QSL_HAVE_OPENMP
#include <omp.h>
#endif

#include "qsl/errors.hpp"
#include "qsl/protocol.hpp"
#include "qsl/qbm_gaussian.hpp"
#include "qsl/transforms.hpp"

namespace qsl {

using nlohmann::json;
namespace fs = std::filesystem;

void configure_threads_from_env() {
#ifdef QSL_HAVE_OPENMP
  if (const char* env = std::getenv("QSL_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::vector<PNorm> run_norms(const RunConfig& config) {
  std::vector<PNorm> ps = config.p_values;
  const PNorm one = PNorm::finite(1.0);
  if (std::find(ps.begin(), ps.end(), one) == ps.end()) ps.insert(ps.begin(), one);
  return ps;
}

namespace {

std::size_t index_of_p1(const std::vector<PNorm>& ps) {
  return static_cast<std::size_t>(std::find(ps.begin(), ps.end(), PNorm::finite(1.0)) - ps.begin());
}

std::vector<std::vector<double>> rows(std::size_t np, std::size_t nt) {
  return std::vector<std::vector<double>>(np, std::vector<double>(nt, 0.0));
}

// Runs body(k) for k in [0, n), in parallel when available; rethrows the
// first exception after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
#ifdef QSL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long k = 0; k < static_cast<long>(n); ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
#ifdef QSL_HAVE_OPENMP
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Fig1Run run_fig1_tau(const RunConfig& config, double tau) {
  config.validate();
  const OscillatorParams& osc = config.oscillator;
  const std::vector<PNorm> ps = run_norms(config);
  const std::size_t p1 = index_of_p1(ps);
  const std::size_t steps = config.steps;
  const std::size_t nt = steps + 1;
  const double hbar = osc.hbar;

  const FrequencyProtocol protocol{osc.omega0, osc.omega1, tau};
  const AuxTrajectory traj =
      solve_aux_ode(protocol, tau / static_cast<double>(steps * config.ode_substeps));
  const UniformGrid1D grid = config.kernel_grid();
  const PhaseGrid pgrid = wigner_phase_grid(grid, hbar);
  const double h = grid.spacing();

  auto time_at = [&](std::size_t k) {
    return k == steps ? tau : tau * static_cast<double>(k) / static_cast<double>(steps);
  };

  const DensityKernel rho0 = parametric_kernel(osc, traj, 0.0, grid);
  const WignerField w0 = wigner_transform(rho0, pgrid, hbar);

  Fig1Run run;
  run.tau = tau;
  RunSeries& s = run.series;
  s.norms = ps;
  s.times.resize(nt);
  s.kernel_distance = rows(ps.size(), nt);
  s.kernel_speed = rows(ps.size(), nt);
  s.wigner_distance = rows(ps.size(), nt);
  s.wigner_speed = rows(ps.size(), nt);
  s.fidelity.assign(nt, 0.0);
  s.overlap_rate.assign(nt, 0.0);
  std::vector<double> trace_drift(nt), norm_drift(nt);

  parallel_for(nt, [&](std::size_t k) {
    const std::size_t lo = k == 0 ? 0 : (k == steps ? k - 2 : k - 1);
    std::vector<DensityKernel> kernels;
    std::vector<WignerField> fields;
    for (std::size_t j = lo; j < lo + 3; ++j) {
      kernels.push_back(parametric_kernel(osc, traj, time_at(j), grid));
      fields.push_back(wigner_transform(kernels.back(), pgrid, hbar));
    }
    const double t = time_at(k);
    const DensityKernel& rho = kernels[k - lo];
    const WignerField& w = fields[k - lo];

    const ComplexMatrix rate = kernel_rate(kernels, t);
    const RealField wrate = wigner_rate(fields, t);

    const auto v = schatten_norms(rate, h, ps);
    const auto l = schatten_norms(rho.values - rho0.values, h, ps);
    const auto vw = wasserstein_norms(wrate, pgrid, ps);
    const auto d = wasserstein_norms(w.values - w0.values, pgrid, ps);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      s.kernel_speed[j][k] = v[j];
      s.kernel_distance[j][k] = l[j];
      s.wigner_speed[j][k] = vw[j];
      s.wigner_distance[j][k] = d[j];
    }
    s.times[k] = t;
    s.fidelity[k] = pure_fidelity(rho0, rho);
    s.overlap_rate[k] = pure_fidelity(rho0, DensityKernel{grid, rate, t});
    trace_drift[k] = std::abs(rho.trace() - 1.0);
    norm_drift[k] = std::abs(w.norm() - 1.0);
  });

  run.max_trace_drift = *std::max_element(trace_drift.begin(), trace_drift.end());
  run.max_wigner_norm_drift = *std::max_element(norm_drift.begin(), norm_drift.end());
  run.v_qsl = SpeedSeries{s.times, s.kernel_speed[p1], "v_qsl_p1"};
  run.v_qsl_w = SpeedSeries{s.times, s.wigner_speed[p1], "v_qsl_w_p1"};
  for (double f : s.fidelity) run.bures_angle.push_back(bures_angle(f));

  run.stationary = run.v_qsl.max() < 1e-6 && run.v_qsl_w.max() < 1e-6;
  if (run.stationary) {
    run.v_qsl_norm = SpeedSeries{s.times, std::vector<double>(nt, 0.0), "v_qsl_p1_norm"};
    run.v_qsl_w_norm = SpeedSeries{s.times, std::vector<double>(nt, 0.0), "v_qsl_w_p1_norm"};
  } else {
    run.v_qsl_norm = normalize_series(run.v_qsl);
    run.v_qsl_w_norm = normalize_series(run.v_qsl_w);
    for (std::size_t k = 0; k < nt; ++k) {
      run.max_normalized_deviation = std::max(
          run.max_normalized_deviation, std::abs(run.v_qsl_norm.values[k] - run.v_qsl_w_norm.values[k]));
    }
    run.argmax_time_kernel = s.times[argmax(run.v_qsl.values)];
    run.argmax_time_wigner = s.times[argmax(run.v_qsl_w.values)];
    const std::vector<double>& d1 = s.wigner_distance[p1];
    run.tau_qsl_w = tau_qsl_w(d1, run.v_qsl_w, tau);
  }

  run.checks = geometric_speed_checks(s);
  run.checks.merge(continuity_checks(s));
  run.checks.merge(schatten_monotonicity_checks(s));
  return run;
}

Fig2Run run_fig2_beta(const RunConfig& config, double beta) {
  config.validate();
  const QbmParams params = config.qbm_params(beta);
  params.validate();
  const std::vector<PNorm> ps = run_norms(config);
  const std::size_t p1 = index_of_p1(ps);

  const PhaseGrid grid = config.qbm_grid();
  WignerField w0 = gaussian_wigner(config.gaussian, grid, config.oscillator.hbar);
  // The grid quadrature of the sampled Gaussian is exact only to ~1e-12.
  w0.values /= w0.norm();

  Fig2Run run;
  run.beta = beta;
  const auto snaps =
      qbm_evolve_auto(w0, params, config.qbm_t_final, config.steps, config.qbm_dt, &run.dt_used);
  const std::size_t nt = snaps.size();

  RunSeries& s = run.series;
  s.norms = ps;
  s.times.resize(nt);
  s.wigner_distance = rows(ps.size(), nt);
  s.wigner_speed = rows(ps.size(), nt);
  run.norm_check.resize(nt);

  parallel_for(nt, [&](std::size_t k) {
    const WignerField& w = snaps[k];
    const auto vw = wasserstein_norms(wigner_rate(w, params), grid, ps);
    const auto d = wasserstein_norms(w.values - w0.values, grid, ps);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      s.wigner_speed[j][k] = vw[j];
      s.wigner_distance[j][k] = d[j];
    }
    s.times[k] = w.time;
    run.norm_check[k] = w.norm();
  });

  for (double n : run.norm_check) run.max_norm_drift = std::max(run.max_norm_drift, std::abs(n - 1.0));
  run.v_qsl_w = SpeedSeries{s.times, s.wigner_speed[p1], "v_qsl_w_p1"};
  run.tau_qsl_w = tau_qsl_w(s.wigner_distance[p1], run.v_qsl_w, config.qbm_t_final);
  run.checks = geometric_speed_checks(s);
  return run;
}

SweepRow sweep_point_gaussian(const RunConfig& config, double beta) {
  const QbmParams params = config.qbm_params(beta);
  const QbmCoefficients coeffs = QbmCoefficients::from(params);
  const GaussianMoments m0 = GaussianMoments::from(config.gaussian);
  const double tau = config.qbm_t_final;

  // time for momentum diffusion to double the initial momentum variance
  const double t_fast = m0.cov(1, 1) / (2.0 * coeffs.d_pp);
  const std::vector<double> times = graded_times(tau, config.steps, t_fast);
  const double max_step = std::min(tau / static_cast<double>(config.steps) / 10.0, t_fast / 50.0);
  const GaussianPath path = qbm_gaussian_path(m0, coeffs, times, max_step);

  SpeedSeries speed{path.times, std::vector<double>(path.times.size()), "v_qsl_w_p1"};
  parallel_for(path.times.size(), [&](std::size_t k) {
    const PhaseGrid grid = comoving_grid(path.moments[k], config.quadrature_n);
    speed.values[k] = wasserstein_norm(sample_gaussian_rate(path.moments[k], path.rates[k], grid), grid,
                                       PNorm::finite(1.0));
  });
  const double distance = gaussian_l1_distance(path.moments.back(), m0, config.quadrature_n);
  const std::array<double, 1> d{distance};
  return SweepRow{beta, tau_qsl_w(d, speed, tau), time_average(speed), distance};
}

SweepRow sweep_point_fd(const RunConfig& config, double beta) {
  RunConfig c = config;
  c.p_values = {PNorm::finite(1.0)};
  const Fig2Run run = run_fig2_beta(c, beta);
  return SweepRow{beta, run.tau_qsl_w, time_average(run.v_qsl_w),
                  run.series.wigner_distance[0].back()};
}

SweepResult run_beta_sweep(const RunConfig& config) {
  config.validate();
  SweepResult result;
  std::vector<double> betas = config.qbm_betas;
  std::sort(betas.begin(), betas.end());
  for (double beta : betas) {
    try {
      result.rows.push_back(config.sweep_backend == "fd" ? sweep_point_fd(config, beta)
                                                         : sweep_point_gaussian(config, beta));
    } catch (const DomainError& e) {
      result.refused.emplace_back(beta, e.what());
    }
  }
  result.monotone = result.rows.size() >= 2;
  for (std::size_t k = 1; k < result.rows.size(); ++k) {
    if (!(result.rows[k].tau_qsl_w > result.rows[k - 1].tau_qsl_w)) result.monotone = false;
  }
  return result;
}

// ---------------------------------------------------------------------------
// output

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
    write_row(header);
  }
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }
  void write_values(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt17(v));
    write_row(cells);
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

fs::path prepare_dir(const RunConfig& config) {
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_json(dir / "config.json", config.to_json());
  return dir;
}

void write_series_csv(const fs::path& path, const RunSeries& s) {
  std::vector<std::string> header{"t"};
  for (const auto& p : s.norms) {
    if (!s.kernel_distance.empty()) header.push_back("l_p" + p.label());
    if (!s.kernel_speed.empty()) header.push_back("v_p" + p.label());
    header.push_back("d_p" + p.label());
    header.push_back("vw_p" + p.label());
  }
  if (s.has_fidelity()) {
    header.push_back("fidelity");
    header.push_back("overlap_rate");
  }
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    std::vector<double> row{s.times[k]};
    for (std::size_t j = 0; j < s.norms.size(); ++j) {
      if (!s.kernel_distance.empty()) row.push_back(s.kernel_distance[j][k]);
      if (!s.kernel_speed.empty()) row.push_back(s.kernel_speed[j][k]);
      row.push_back(s.wigner_distance[j][k]);
      row.push_back(s.wigner_speed[j][k]);
    }
    if (s.has_fidelity()) {
      row.push_back(s.fidelity[k]);
      row.push_back(s.overlap_rate[k]);
    }
    csv.write_values(row);
  }
}

json check_json(const CheckReport& r) {
  json j;
  j["evaluated"] = r.evaluated;
  j["violations"] = r.violations.size();
  j["passed"] = r.passed();
  json list = json::array();
  for (std::size_t k = 0; k < r.violations.size() && k < 20; ++k) {
    const auto& v = r.violations[k];
    list.push_back({{"check", v.check}, {"t", v.t}, {"p", v.p}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  j["first_violations"] = list;
  return j;
}

// Fraction of time nodes where the phase-space rate norms decrease in p.
double wasserstein_monotone_fraction(const RunSeries& s) {
  std::vector<std::size_t> order(s.norms.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s.norms[a].is_infinite() != s.norms[b].is_infinite()) return s.norms[b].is_infinite();
    return s.norms[a].value() < s.norms[b].value();
  });
  std::size_t ok = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    bool mono = true;
    for (std::size_t j = 1; j < order.size(); ++j) {
      if (s.wigner_speed[order[j]][k] > s.wigner_speed[order[j - 1]][k]) mono = false;
    }
    ok += mono ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(s.times.size());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

std::string fig1_file_name(const RunConfig& config, double tau) {
  return config.prefix + "fig1_tau" + fmt_short(tau) + ".csv";
}

RunOutcome execute_fig1(const RunConfig& config, std::vector<Fig1Run>* runs_out) {
  config.validate();
  const fs::path dir = prepare_dir(config);
  RunOutcome outcome;
  json runs = json::array();
  bool all_checks = true;
  for (double tau : config.taus) {
    const Fig1Run run = run_fig1_tau(config, tau);
    const std::string name = fig1_file_name(config, tau);
    {
      CsvWriter csv(dir / name, {"t", "v_qsl_p1", "v_qsl_w_p1", "v_qsl_p1_norm", "v_qsl_w_p1_norm",
                                 "l1_dist", "wasserstein1_dist", "fidelity", "bures_angle"});
      const std::size_t p1 = index_of_p1(run.series.norms);
      for (std::size_t k = 0; k < run.series.times.size(); ++k) {
        csv.write_values({run.series.times[k], run.v_qsl.values[k], run.v_qsl_w.values[k],
                          run.v_qsl_norm.values[k], run.v_qsl_w_norm.values[k],
                          run.series.kernel_distance[p1][k], run.series.wigner_distance[p1][k],
                          run.series.fidelity[k], run.bures_angle[k]});
      }
    }
    write_series_csv(dir / (name.substr(0, name.size() - 4) + "_series.csv"), run.series);

    all_checks = all_checks && run.checks.passed();
    runs.push_back({{"tau", tau},
                    {"file", name},
                    {"rows", run.series.times.size()},
                    {"stationary", run.stationary},
                    {"max_normalized_deviation", run.max_normalized_deviation},
                    {"argmax_t_v_qsl", run.argmax_time_kernel},
                    {"argmax_t_v_qsl_w", run.argmax_time_wigner},
                    {"tau_qsl_w", run.tau_qsl_w},
                    {"max_trace_drift", run.max_trace_drift},
                    {"max_wigner_norm_drift", run.max_wigner_norm_drift},
                    {"wasserstein_p_monotone_fraction", wasserstein_monotone_fraction(run.series)},
                    {"checks", check_json(run.checks)}});
    if (runs_out) runs_out->push_back(run);
  }
  outcome.summary = {{"experiment", "fig1"}, {"runs", runs}, {"checks_passed", all_checks}};
  outcome.exit_code = all_checks ? kExitOk : kExitCheckFailed;
  write_json(dir / "summary.json", outcome.summary);
  return outcome;
}

RunOutcome execute_fig2(const RunConfig& config, Fig2Run* run_out) {
  config.validate();
  const fs::path dir = prepare_dir(config);
  const Fig2Run run = run_fig2_beta(config, config.qbm_beta);
  const std::string name = config.prefix + "fig2.csv";
  {
    CsvWriter csv(dir / name, {"t", "v_qsl_w_p1", "wasserstein1_dist", "norm_check"});
    const std::size_t p1 = index_of_p1(run.series.norms);
    for (std::size_t k = 0; k < run.series.times.size(); ++k) {
      csv.write_values({run.series.times[k], run.v_qsl_w.values[k], run.series.wigner_distance[p1][k],
                        run.norm_check[k]});
    }
  }
  write_series_csv(dir / (config.prefix + "fig2_series.csv"), run.series);

  RunOutcome outcome;
  outcome.summary = {{"experiment", "fig2"},
                     {"file", name},
                     {"beta", run.beta},
                     {"d_pp", config.qbm_params(run.beta).d_pp()},
                     {"d_xp", config.qbm_params(run.beta).d_xp()},
                     {"dt", run.dt_used},
                     {"rows", run.series.times.size()},
                     {"max_norm_drift", run.max_norm_drift},
                     {"tau_qsl_w", run.tau_qsl_w},
                     {"checks", check_json(run.checks)},
                     {"checks_passed", run.checks.passed()}};
  outcome.exit_code = run.checks.passed() ? kExitOk : kExitCheckFailed;
  write_json(dir / "summary.json", outcome.summary);
  if (run_out) *run_out = run;
  return outcome;
}

RunOutcome execute_sweep(const RunConfig& config, SweepResult* result_out) {
  config.validate();
  const fs::path dir = prepare_dir(config);
  const SweepResult result = run_beta_sweep(config);
  const std::string name = config.prefix + "sweep_beta.csv";
  {
    CsvWriter csv(dir / name, {"beta", "tau_qsl_w", "mean_speed", "final_distance"});
    for (const auto& r : result.rows) csv.write_values({r.beta, r.tau_qsl_w, r.mean_speed, r.final_distance});
  }
  json refused = json::array();
  for (const auto& [beta, why] : result.refused) refused.push_back({{"beta", beta}, {"reason", why}});
  RunOutcome outcome;
  outcome.summary = {{"experiment", "beta-sweep"},
                     {"file", name},
                     {"backend", config.sweep_backend},
                     {"rows", result.rows.size()},
                     {"refused", refused},
                     {"monotone_in_beta", result.monotone},
                     {"verdict", result.refused.empty() && result.monotone
                                     ? "tau_qsl_w decreases with temperature"
                                     : "monotonicity not established over the requested betas"}};
  outcome.exit_code = result.refused.empty() ? kExitOk : kExitNumerical;
  write_json(dir / "summary.json", outcome.summary);
  if (result_out) *result_out = result;
  return outcome;
}

RunSeries read_series_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty series file " + path.string());
  const std::vector<std::string> header = split(line, ',');
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw IoError("ragged row in " + path.string());
    for (std::size_t c = 0; c < cells.size(); ++c) cols[c].push_back(std::stod(cells[c]));
  }
  if (header.empty() || header[0] != "t") throw IoError("series file must start with column t");

  RunSeries s;
  s.times = cols[0];
  auto column = [&](const std::string& name) -> const std::vector<double>* {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? nullptr : &cols[static_cast<std::size_t>(it - header.begin())];
  };
  for (const auto& h : header) {
    if (h.rfind("vw_p", 0) == 0) s.norms.push_back(PNorm::parse(h.substr(4)));
  }
  for (const auto& p : s.norms) {
    const std::string lbl = p.label();
    if (const auto* c = column("l_p" + lbl)) s.kernel_distance.push_back(*c);
    if (const auto* c = column("v_p" + lbl)) s.kernel_speed.push_back(*c);
    if (const auto* c = column("d_p" + lbl)) s.wigner_distance.push_back(*c);
    if (const auto* c = column("vw_p" + lbl)) s.wigner_speed.push_back(*c);
  }
  if (const auto* c = column("fidelity")) s.fidelity = *c;
  if (const auto* c = column("overlap_rate")) s.overlap_rate = *c;
  s.validate();
  return s;
}

RunOutcome execute_check(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 11 && name.substr(name.size() - 11) == "_series.csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no *_series.csv files in " + dir.string());

  RunOutcome outcome;
  json per_file = json::array();
  bool ok = true;
  for (const auto& f : files) {
    const RunSeries s = read_series_csv(f);
    CheckReport r = geometric_speed_checks(s);
    r.merge(continuity_checks(s));
    r.merge(schatten_monotonicity_checks(s));
    ok = ok && r.passed();
    json entry = check_json(r);
    entry["file"] = f.filename().string();
    entry["report"] = r.describe();
    per_file.push_back(entry);
  }
  outcome.summary = {{"checked", per_file}, {"passed", ok}};
  outcome.exit_code = ok ? kExitOk : kExitCheckFailed;
  return outcome;
}

}  // namespace qsl
