#include "qsl/speed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

void SpeedSeries::validate() const {
  if (times.size() != values.size()) throw ShapeError("speed series: times/values length mismatch");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ArgumentError("speed series: times must increase strictly");
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw ArgumentError("speed series: values must be non-negative");
  }
}

double SpeedSeries::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

namespace {

// Index of t in a uniform time grid, with the grid spacing.
template <class Snapshot>
std::pair<std::size_t, double> locate(std::span<const Snapshot> snaps, double t) {
  if (snaps.size() < 3) throw RangeError("rate needs at least three snapshots");
  const double dt = snaps[1].time - snaps[0].time;
  if (!(dt > 0.0)) throw RangeError("snapshot times must increase");
  for (std::size_t k = 2; k < snaps.size(); ++k) {
    if (std::abs((snaps[k].time - snaps[k - 1].time) - dt) > 1e-9 * dt) {
      throw RangeError("snapshots are not uniformly spaced in time");
    }
  }
  const double pos = (t - snaps[0].time) / dt;
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-6 || idx < 0 || idx > static_cast<double>(snaps.size() - 1)) {
    std::ostringstream os;
    os << "no snapshot at t=" << t << " (have [" << snaps.front().time << ", "
       << snaps.back().time << "] step " << dt << ")";
    throw RangeError(os.str());
  }
  return {static_cast<std::size_t>(idx), dt};
}

}  // namespace

ComplexMatrix kernel_rate(std::span<const DensityKernel> states, double t) {
  const auto [index, dt] = locate(states, t);
  for (const auto& s : states) {
    if (!s.grid.matches(states[0].grid)) throw ShapeError("kernel_rate: snapshots on different grids");
  }
  std::vector<ComplexMatrix> values;
  values.reserve(3);
  const std::size_t lo = index == 0 ? 0 : (index == states.size() - 1 ? index - 2 : index - 1);
  for (std::size_t k = lo; k < lo + 3; ++k) values.push_back(states[k].values);
  return three_point_derivative<ComplexMatrix>(values, index - lo, dt);
}

RealField wigner_rate(std::span<const WignerField> fields, double t) {
  const auto [index, dt] = locate(fields, t);
  for (const auto& f : fields) {
    if (!f.grid.matches(fields[0].grid)) throw ShapeError("wigner_rate: snapshots on different grids");
  }
  std::vector<RealField> values;
  values.reserve(3);
  const std::size_t lo = index == 0 ? 0 : (index == fields.size() - 1 ? index - 2 : index - 1);
  for (std::size_t k = lo; k < lo + 3; ++k) values.push_back(fields[k].values);
  return three_point_derivative<RealField>(values, index - lo, dt);
}

RealField wigner_rate(const WignerField& w, const QbmParams& params) { return qbm_rhs(w, params); }

double v_qsl(std::span<const DensityKernel> states, double t, PNorm p) {
  return schatten_norm(kernel_rate(states, t), states[0].grid.spacing(), p);
}

double v_qsl_w(std::span<const WignerField> fields, double t, PNorm p) {
  return wasserstein_norm(wigner_rate(fields, t), fields[0].grid, p);
}

double v_qsl_w(const WignerField& w, const QbmParams& params, PNorm p) {
  return wasserstein_norm(wigner_rate(w, params), w.grid, p);
}

SpeedSeries normalize_series(const SpeedSeries& s) {
  s.validate();
  const double peak = s.max();
  if (!(peak > 0.0)) throw ArgumentError("cannot normalize an all-zero speed series");
  SpeedSeries out = s;
  for (double& v : out.values) v /= peak;
  out.label = s.label + "_norm";
  return out;
}

double time_average(const SpeedSeries& s) {
  s.validate();
  if (s.times.size() < 2) throw ArgumentError("time average needs at least two samples");
  double integral = 0.0;
  for (std::size_t k = 1; k < s.times.size(); ++k) {
    integral += 0.5 * (s.values[k] + s.values[k - 1]) * (s.times[k] - s.times[k - 1]);
  }
  return integral / (s.times.back() - s.times.front());
}

double tau_qsl_w(std::span<const double> distances, const SpeedSeries& speed, double tau) {
  if (distances.empty()) throw ArgumentError("tau_qsl_w needs a distance series");
  if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
  if (std::abs(speed.times.back() - speed.times.front() - tau) > 1e-9 * tau) {
    throw ArgumentError("speed series must span [0, tau]");
  }
  const double mean_speed = time_average(speed);
  if (!(mean_speed > 0.0)) throw NumericalError("tau_qsl_w undefined: time-averaged speed is zero");
  return distances.back() / mean_speed;
}

void RunSeries::validate() const {
  const std::size_t n = times.size();
  auto check_block = [&](const std::vector<std::vector<double>>& block, const char* name) {
    if (block.empty()) return;
    if (block.size() != norms.size()) {
      throw ShapeError(std::string("run series: ") + name + " needs one row per norm");
    }
    for (const auto& row : block) {
      if (row.size() != n) throw ShapeError(std::string("run series: ") + name + " length mismatch");
    }
  };
  check_block(kernel_distance, "kernel_distance");
  check_block(kernel_speed, "kernel_speed");
  check_block(wigner_distance, "wigner_distance");
  check_block(wigner_speed, "wigner_speed");
  if (!fidelity.empty() && (fidelity.size() != n || overlap_rate.size() != n)) {
    throw ShapeError("run series: fidelity/overlap length mismatch");
  }
}

void CheckReport::merge(const CheckReport& other) {
  evaluated += other.evaluated;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

std::string CheckReport::describe(std::size_t max_lines) const {
  std::ostringstream os;
  os.precision(10);
  os << evaluated << " inequalities evaluated, " << violations.size() << " violated";
  for (std::size_t k = 0; k < violations.size() && k < max_lines; ++k) {
    const auto& v = violations[k];
    os << "\n  " << v.check << " t=" << v.t << " p=" << v.p << " lhs=" << v.lhs << " rhs=" << v.rhs;
  }
  if (violations.size() > max_lines) os << "\n  ...";
  return os.str();
}

namespace {

double slope(const std::vector<double>& f, const std::vector<double>& t, std::size_t k) {
  return (f[k + 1] - f[k - 1]) / (t[k + 1] - t[k - 1]);
}

// Mean of f over [t[k-1], t[k+1]] by three-point Simpson on possibly unequal steps.
double simpson_mean(const std::vector<double>& f, const std::vector<double>& t, std::size_t k) {
  const double h0 = t[k] - t[k - 1];
  const double h1 = t[k + 1] - t[k];
  const double w0 = 2.0 - h1 / h0;
  const double w1 = (h0 + h1) * (h0 + h1) / (h0 * h1);
  const double w2 = 2.0 - h0 / h1;
  return (w0 * f[k - 1] + w1 * f[k] + w2 * f[k + 1]) / 6.0;
}

struct Tolerance {
  double abs;
  double rel;
  bool holds(double lhs, double rhs) const { return lhs <= rhs + abs + rel * std::abs(rhs); }
};

}  // namespace

CheckReport geometric_speed_checks(const RunSeries& run, double abs_tol, double rel_tol) {
  run.validate();
  CheckReport report;
  const Tolerance tol{abs_tol, rel_tol};
  const auto& t = run.times;
  if (t.size() < 3) return report;

  auto record = [&](const char* check, std::size_t k, const std::string& p, double lhs, double rhs) {
    ++report.evaluated;
    if (!tol.holds(lhs, rhs)) report.violations.push_back({check, t[k], p, lhs, rhs});
  };

  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    for (std::size_t j = 0; j < run.norms.size(); ++j) {
      const std::string p = run.norms[j].label();
      if (!run.kernel_distance.empty() && !run.kernel_speed.empty()) {
        record("schatten", k, p, slope(run.kernel_distance[j], t, k), simpson_mean(run.kernel_speed[j], t, k));
      }
      if (!run.wigner_distance.empty() && !run.wigner_speed.empty()) {
        record("wasserstein", k, p, slope(run.wigner_distance[j], t, k), simpson_mean(run.wigner_speed[j], t, k));
      }
    }
    if (run.has_fidelity() && run.has_kernels()) {
      const double angle = bures_angle(run.fidelity[k]);
      const double angle_rate = (bures_angle(run.fidelity[k + 1]) - bures_angle(run.fidelity[k - 1])) /
                                (t[k + 1] - t[k - 1]);
      const double lhs = std::sin(2.0 * angle) * angle_rate;
      const double mid = std::abs(run.overlap_rate[k]);
      double min_norm = run.kernel_speed[0][k];
      for (const auto& row : run.kernel_speed) min_norm = std::min(min_norm, row[k]);
      record("bures-overlap", k, "-", lhs, mid);
      record("overlap-schatten", k, "min", mid, min_norm);
    }
  }
  return report;
}

CheckReport continuity_checks(const RunSeries& run, double tol) {
  run.validate();
  CheckReport report;
  if (!run.has_fidelity() || run.kernel_distance.empty()) return report;
  auto it = std::find_if(run.norms.begin(), run.norms.end(),
                         [](const PNorm& p) { return !p.is_infinite() && p.value() == 1.0; });
  if (it == run.norms.end()) return report;
  const auto& l1 = run.kernel_distance[static_cast<std::size_t>(it - run.norms.begin())];
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    ++report.evaluated;
    if (!continuity_check(run.fidelity[k], l1[k], tol)) {
      report.violations.push_back({"continuity", run.times[k], "1", 0.5 * l1[k], run.fidelity[k]});
    }
  }
  return report;
}

CheckReport schatten_monotonicity_checks(const RunSeries& run, double rel_slack) {
  run.validate();
  CheckReport report;
  if (!run.has_kernels()) return report;
  // order norms by exponent, infinity last
  std::vector<std::size_t> order(run.norms.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const PNorm& pa = run.norms[a];
    const PNorm& pb = run.norms[b];
    if (pa.is_infinite() != pb.is_infinite()) return pb.is_infinite();
    return pa.value() < pb.value();
  });
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    for (std::size_t j = 1; j < order.size(); ++j) {
      const double lower_p = run.kernel_speed[order[j - 1]][k];
      const double higher_p = run.kernel_speed[order[j]][k];
      ++report.evaluated;
      if (higher_p > lower_p * (1.0 + rel_slack)) {
        report.violations.push_back({"schatten-monotonicity", run.times[k],
                                     run.norms[order[j]].label(), higher_p, lower_p});
      }
    }
  }
  return report;
}

}  // namespace qsl
