#include "qsl/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

void FrequencyProtocol::validate() const {
  if (!(omega0 > 0.0) || !(omega1 > 0.0) || !(tau > 0.0)) {
    throw ArgumentError("protocol requires omega0, omega1, tau > 0");
  }
}

double FrequencyProtocol::omega_squared(double t) const {
  const double w0 = omega0 * omega0;
  const double w1 = omega1 * omega1;
  return w0 - (w0 - w1) * t / tau;
}

AuxTrajectory::AuxTrajectory(FrequencyProtocol protocol, std::vector<double> times,
                             std::vector<AuxState> states)
    : protocol_(protocol), times_(std::move(times)), states_(std::move(states)) {
  if (times_.size() < 2 || times_.size() != states_.size()) {
    throw ArgumentError("trajectory needs at least two samples with matching states");
  }
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw ArgumentError("trajectory times must increase");
  }
}

namespace {

// Hermite basis on [0,1] for value f0,f1 and slopes m0,m1 (already scaled by h).
double hermite(double s, double f0, double m0, double f1, double m1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * f1 +
         (s3 - s2) * m1;
}

}  // namespace

AuxState AuxTrajectory::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t_end()));
  if (t < t_begin() - slack || t > t_end() + slack) {
    std::ostringstream os;
    os << "time " << t << " outside trajectory range [" << t_begin() << ", " << t_end() << "]";
    throw RangeError(os.str());
  }
  t = std::clamp(t, t_begin(), t_end());
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = (it == times_.begin()) ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (k >= times_.size() - 1) k = times_.size() - 2;

  const double t0 = times_[k];
  const double t1 = times_[k + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  if (s == 0.0) return states_[k];
  if (s == 1.0) return states_[k + 1];

  const AuxState& a = states_[k];
  const AuxState& b = states_[k + 1];
  const double wa = protocol_.omega_squared(t0);
  const double wb = protocol_.omega_squared(t1);

  AuxState out;
  out.x = hermite(s, a.x, h * a.dx, b.x, h * b.dx);
  out.dx = hermite(s, a.dx, -h * wa * a.x, b.dx, -h * wb * b.x);
  out.y = hermite(s, a.y, h * a.dy, b.y, h * b.dy);
  out.dy = hermite(s, a.dy, -h * wa * a.y, b.dy, -h * wb * b.y);
  return out;
}

double AuxTrajectory::max_wronskian_drift() const {
  double drift = 0.0;
  for (const auto& s : states_) drift = std::max(drift, std::abs(s.wronskian() - 1.0));
  return drift;
}

AuxTrajectory solve_aux_ode(const FrequencyProtocol& protocol, double dt) {
  protocol.validate();
  if (!(dt > 0.0) || dt > protocol.tau / 100.0 * (1.0 + 1e-12)) {
    throw ArgumentError("aux ODE step must satisfy 0 < dt <= tau/100");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(protocol.tau / dt - 1e-9));
  const double h = protocol.tau / static_cast<double>(steps);

  auto deriv = [&](double t, const AuxState& s) {
    const double w2 = protocol.omega_squared(t);
    return AuxState{s.dx, -w2 * s.x, s.dy, -w2 * s.y};
  };
  auto axpy = [](const AuxState& s, double a, const AuxState& k) {
    return AuxState{s.x + a * k.x, s.dx + a * k.dx, s.y + a * k.y, s.dy + a * k.dy};
  };

  std::vector<double> times(steps + 1);
  std::vector<AuxState> states(steps + 1);
  times[0] = 0.0;
  states[0] = AuxState{0.0, 1.0, 1.0, 0.0};

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const AuxState& s = states[n];
    const AuxState k1 = deriv(t, s);
    const AuxState k2 = deriv(t + 0.5 * h, axpy(s, 0.5 * h, k1));
    const AuxState k3 = deriv(t + 0.5 * h, axpy(s, 0.5 * h, k2));
    const AuxState k4 = deriv(t + h, axpy(s, h, k3));
    states[n + 1] = AuxState{
        s.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
        s.dx + h / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
        s.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
        s.dy + h / 6.0 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy),
    };
    times[n + 1] = static_cast<double>(n + 1) * h;
  }
  times.back() = protocol.tau;

  AuxTrajectory traj(protocol, std::move(times), std::move(states));
  const double drift = traj.max_wronskian_drift();
  if (drift > 1e-6) {
    std::ostringstream os;
    os << "aux ODE step " << h << " too coarse: Wronskian drift " << drift;
    throw AccuracyError(os.str());
  }
  return traj;
}

}  // namespace qsl
