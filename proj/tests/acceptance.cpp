// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "qsl/experiments.hpp"
#include "qsl/qbm.hpp"
#include "qsl/transforms.hpp"

using namespace qsl;

namespace {

constexpr double kEquivalenceTol = 0.05;
constexpr double kContinuityTol = 1e-6;
constexpr double kRoundTripTol = 1e-8;
constexpr double kPurityTol = 1e-5;
constexpr double kAnalyticWignerTol = 1e-6;
constexpr double kNormDriftTol = 1e-4;
constexpr double kGibbsTol = 1e-3;
constexpr double kDirectQuadratureTol = 1e-6;
constexpr double kSchattenOracleTol = 1e-9;
constexpr double kStationaryTol = 1e-6;
constexpr std::size_t kOracleN = 64;

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
  const OscillatorParams osc{1.0, 1.0, 1.0, 2.0};

  RunConfig fig1 = preset("fig1");
  fig1.grid_n = 256;
  fig1.steps = 400;
  fig1.out_dir = (out / "fig1").string();
  std::vector<Fig1Run> runs;
  const RunOutcome fig1_outcome = execute_fig1(fig1, &runs);

  RunConfig fig2 = preset("fig2");
  fig2.out_dir = (out / "fig2").string();
  Fig2Run open_run;
  execute_fig2(fig2, &open_run);

  {
    double worst = 0.0;
    std::string per_tau;
    for (const auto& r : runs) {
      worst = std::max(worst, r.max_normalized_deviation);
      per_tau += fmt(" tau=%g:%.4f", r.tau, r.max_normalized_deviation);
    }
    report("fig1-equivalence", worst <= kEquivalenceTol && fig1_outcome.exit_code == kExitOk,
           fmt("max |v_norm - v_w_norm| = %.3e (tol %.2g);", worst, kEquivalenceTol) + per_tau);
  }

  {
    const CheckReport unitary_geo = [&] {
      CheckReport all;
      for (const auto& r : runs) all.merge(geometric_speed_checks(r.series, 1e-4, 1e-3));
      return all;
    }();
    const CheckReport open_geo = geometric_speed_checks(open_run.series, 1e-4, 1e-3);
    const std::size_t n = unitary_geo.evaluated + open_geo.evaluated;
    const std::size_t bad = unitary_geo.violations.size() + open_geo.violations.size();
    report("geometric-speed-suite", bad == 0,
           fmt("%g inequalities over 4 unitary runs + open run, %g violated (tol 1e-4 abs + 1e-3 rel)",
               static_cast<double>(n), static_cast<double>(bad)));
  }

  {
    CheckReport all;
    for (const auto& r : runs) all.merge(continuity_checks(r.series, kContinuityTol));
    report("continuity-bounds", all.passed() && all.evaluated > 0,
           fmt("%g nodes, %g violated (tol %.0e)", static_cast<double>(all.evaluated),
               static_cast<double>(all.violations.size()), kContinuityTol));
  }

  {
    CheckReport all;
    for (const auto& r : runs) all.merge(schatten_monotonicity_checks(r.series, 1e-10));
    report("schatten-monotonicity", all.passed() && all.evaluated > 0,
           fmt("%g comparisons, %g violated (rel slack 1e-10)", static_cast<double>(all.evaluated),
               static_cast<double>(all.violations.size())));
  }

  {
    const UniformGrid1D g = fig1.kernel_grid();
    const DensityKernel ground = ground_state_kernel(osc, g);
    const WignerField wg = wigner_transform(ground, 1.0);
    const double round_trip = (inverse_wigner_transform(wg, g).values - ground.values).cwiseAbs().maxCoeff();

    double analytic = 0.0;
    for (long i = 0; i < wg.values.rows(); ++i)
      for (long k = 0; k < wg.values.cols(); ++k)
        analytic = std::max(analytic, std::abs(wg.values(i, k) - oracle::ground_wigner(wg.grid.x()[i], wg.grid.p()[k],
                                                                                       1.0, 1.0, 1.0)));

    std::vector<DensityKernel> states{ground, DensityKernel{g, oracle::excited_kernel(g), 0.0}};
    states.push_back(DensityKernel{g, 0.5 * (states[0].values + states[1].values), 0.0});
    for (double tau : fig1.taus) {
      const AuxTrajectory traj = solve_aux_ode(FrequencyProtocol{1.0, 2.0, tau}, tau / 4000.0);
      for (int k = 1; k <= 4; ++k) states.push_back(parametric_kernel(osc, traj, tau * k / 4.0, g));
    }
    double purity = 0.0;
    for (const auto& s : states) purity = std::max(purity, std::abs(wigner_transform(s, 1.0).purity() - s.purity()));

    report("transform-fidelity",
           round_trip <= kRoundTripTol && purity <= kPurityTol && analytic <= kAnalyticWignerTol,
           fmt("round trip %.2e (tol 1e-8), purity gap %.2e over ", round_trip, purity) +
               std::to_string(states.size()) + fmt(" states (tol 1e-5), analytic ground %.2e (tol 1e-6)", analytic));
  }

  {
    const double beta = 0.01;
    const oracle::Gibbs gibbs(beta, 1.0, 1.0, 1.0);
    const std::size_t n = 281;
    const PhaseGrid g(UniformGrid1D(-70.0, 70.0, n), UniformGrid1D(-70.0, 70.0, n));
    WignerField w0{g, RealField(n, n), 0.0, 1.0};
    for (long i = 0; i < static_cast<long>(n); ++i)
      for (long k = 0; k < static_cast<long>(n); ++k) w0.values(i, k) = gibbs(g.x()[i], g.p()[k]);
    w0.values /= w0.norm();
    const auto snaps = qbm_evolve_auto(w0, QbmParams{2.0, beta, 1.0, 1.0, 1.0}, 1.0, 1);
    const double drift = wasserstein_distance(snaps.back(), w0, PNorm::finite(1.0));
    report("qbm-conservation",
           open_run.max_norm_drift <= kNormDriftTol && drift <= kGibbsTol,
           fmt("open-run normalization drift %.2e (tol 1e-4), Gibbs beta=0.01 W1 drift over t=1 %.2e (tol 1e-3)",
               open_run.max_norm_drift, drift));
  }

  {
    RunConfig sweep = preset("beta-sweep");
    sweep.out_dir = (out / "sweep").string();
    SweepResult result;
    const RunOutcome outcome = execute_sweep(sweep, &result);
    std::string rows;
    for (const auto& r : result.rows) rows += fmt(" beta=%g:%.4f", r.beta, r.tau_qsl_w);
    for (const auto& [beta, why] : result.refused) rows += fmt(" beta=%g:refused", beta);
    const bool ok = result.refused.empty() && result.monotone && result.rows.size() == sweep.qbm_betas.size();
    report("semiclassical-monotonicity", ok && outcome.exit_code == kExitOk,
           std::string(result.monotone ? "monotone over computed betas;" : "not monotone;") + rows);
  }

  {
    const UniformGrid1D g(-8.0, 8.0, kOracleN);
    const PhaseGrid pg = wigner_phase_grid(g, 1.0);
    std::vector<ComplexMatrix> kernels{ground_state_kernel(osc, g).values, oracle::excited_kernel(g)};
    for (double tau : fig1.taus) {
      const AuxTrajectory traj = solve_aux_ode(FrequencyProtocol{1.0, 2.0, tau}, tau / 2000.0);
      kernels.push_back(parametric_kernel(osc, traj, 0.5 * tau, g).values);
      kernels.push_back(parametric_kernel(osc, traj, tau, g).values);
    }
    double quad = 0.0;
    for (const auto& k : kernels) {
      const WignerField w = wigner_transform(DensityKernel{g, k, 0.0}, pg, 1.0);
      quad = std::max(quad, max_abs(w.values - oracle::direct_wigner(k, g, pg.p(), 1.0)));
    }

    std::vector<ComplexMatrix> mats;
    for (unsigned seed = 1; seed <= 4; ++seed) mats.push_back(oracle::random_matrix(kOracleN, seed));
    for (std::size_t k = 1; k < kernels.size(); ++k) mats.push_back(kernels[k] - kernels[0]);
    double schatten = 0.0;
    for (const auto& m : mats) {
      for (double p : {1.0, 2.0, 3.0, HUGE_VAL}) {
        const PNorm pn = std::isinf(p) ? PNorm::infinity() : PNorm::finite(p);
        const double ref = oracle::schatten_from_eigen(m, g.spacing(), p);
        schatten = std::max(schatten, std::abs(schatten_norm(m, g.spacing(), pn) - ref) / std::max(1.0, ref));
      }
    }
    report("oracle-equivalence", quad <= kDirectQuadratureTol && schatten <= kSchattenOracleTol,
           fmt("n=%g: FFT vs direct quadrature %.2e (tol 1e-6), singular values vs Jacobi/Gram oracle %.2e (tol 1e-9)",
               static_cast<double>(kOracleN), quad, schatten));
  }

  {
    RunConfig c = preset("constant");
    c.grid_n = 256;
    c.steps = 400;
    const Fig1Run r = run_fig1_tau(c, 1.0);
    double worst = 0.0;
    for (const auto& row : r.series.kernel_speed) for (double v : row) worst = std::max(worst, v);
    for (const auto& row : r.series.wigner_speed) for (double v : row) worst = std::max(worst, v);
    report("stationary-null", worst < kStationaryTol && r.stationary,
           fmt("max speed over all p, both representations %.2e (tol 1e-6)", worst));
  }

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
