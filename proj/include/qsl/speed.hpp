#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsl/grid.hpp"
#include "qsl/metrics.hpp"
#include "qsl/qbm.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Time series of a speed limit. values >= 0, times strictly increasing.
struct SpeedSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  void validate() const;
  double max() const;
};

/// Three-point derivative at sample `index` of a uniformly spaced sequence:
/// central in the interior, one-sided second order at either end.
template <class Sample>
Sample three_point_derivative(std::span<const Sample> samples, std::size_t index, double dt) {
  const std::size_t n = samples.size();
  if (index == 0) return (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dt);
  if (index == n - 1) {
    return (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) / (2.0 * dt);
  }
  return (samples[index + 1] - samples[index - 1]) / (2.0 * dt);
}

/// d rho/dt at time t from kernels on a uniform time grid (at least 3).
/// Throws RangeError if t is not one of the snapshot times or too few exist.
ComplexMatrix kernel_rate(std::span<const DensityKernel> states, double t);

/// dW/dt at time t by finite differences of uniformly spaced snapshots.
RealField wigner_rate(std::span<const WignerField> fields, double t);

/// Open-system override: the generator applied to the snapshot at t.
RealField wigner_rate(const WignerField& w, const QbmParams& params);

double v_qsl(std::span<const DensityKernel> states, double t, PNorm p);
double v_qsl_w(std::span<const WignerField> fields, double t, PNorm p);
double v_qsl_w(const WignerField& w, const QbmParams& params, PNorm p);

/// Divides by the maximum; throws ArgumentError for an all-zero series.
SpeedSeries normalize_series(const SpeedSeries& s);

/// D(W_tau, W_0) / ((1/tau) * trapezoid integral of v over [0, tau]).
/// `distances` is the D(W_t, W_0) series; its last entry is used.
/// Throws NumericalError if the time-averaged speed vanishes.
double tau_qsl_w(std::span<const double> distances, const SpeedSeries& speed, double tau);

/// Time-average of a series over its time span (trapezoid rule).
double time_average(const SpeedSeries& s);

/// Everything the inequality suite needs from one run. Per-p vectors are
/// indexed [p][time]; representations that were not evolved stay empty.
struct RunSeries {
  std::vector<double> times;
  std::vector<PNorm> norms;
  std::vector<std::vector<double>> kernel_distance;
  std::vector<std::vector<double>> kernel_speed;
  std::vector<std::vector<double>> wigner_distance;
  std::vector<std::vector<double>> wigner_speed;
  std::vector<double> fidelity;
  std::vector<double> overlap_rate;  ///< <psi0| d rho/dt |psi0>

  bool has_kernels() const { return !kernel_speed.empty(); }
  bool has_fidelity() const { return !fidelity.empty(); }
  void validate() const;
};

struct Violation {
  std::string check;
  double t;
  std::string p;
  double lhs;
  double rhs;
};

struct CheckReport {
  std::size_t evaluated = 0;
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  void merge(const CheckReport& other);
  std::string describe(std::size_t max_lines = 20) const;
};

/// At every interior node, with tol = abs_tol + rel_tol * |rhs|:
///  (a) d l_p/dt <= ||d rho/dt||_p
///  (b) d D_p/dt <= ||dW/dt||_p
/// (a) and (b) are taken in integrated form over [t[k-1], t[k+1]]: the
/// distance increment against the Simpson integral of the speed.
///  (c) sin(2L) dL/dt <= |<psi0|d rho/dt|psi0>| <= min_p ||d rho/dt||_p
/// Checks on missing representations are skipped.
CheckReport geometric_speed_checks(const RunSeries& run, double abs_tol = 1e-4,
                                   double rel_tol = 1e-3);

/// 1 - sqrt F <= l1/2 <= sqrt(1 - F) at every node.
CheckReport continuity_checks(const RunSeries& run, double tol = 1e-6);

/// ||.||_p non-increasing in p for every kernel rate norm, relative slack.
CheckReport schatten_monotonicity_checks(const RunSeries& run, double rel_slack = 1e-10);

}  // namespace qsl
