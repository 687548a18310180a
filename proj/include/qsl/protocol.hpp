#pragma once

#include <cstddef>
#include <vector>

namespace qsl {

/// Linear quench of the squared frequency,
///   omega_t^2 = omega0^2 - (omega0^2 - omega1^2) * t / tau,   t in [0, tau].
/// omega1 == omega0 gives the constant protocol.
struct FrequencyProtocol {
  double omega0 = 1.0;
  double omega1 = 2.0;
  double tau = 1.0;

  void validate() const;
  double omega_squared(double t) const;
  bool is_constant() const { return omega0 == omega1; }
};

/// Phase-space point of both auxiliary solutions at one time.
struct AuxState {
  double x = 0.0;
  double dx = 0.0;
  double y = 0.0;
  double dy = 0.0;

  double wronskian() const { return dx * y - x * dy; }
};

/// Classical solutions X_t, Y_t of  q'' + omega_t^2 q = 0  with
/// X(0)=0, X'(0)=1, Y(0)=1, Y'(0)=0, stored on a uniform time grid.
class AuxTrajectory {
 public:
  AuxTrajectory(FrequencyProtocol protocol, std::vector<double> times,
                std::vector<AuxState> states);

  const FrequencyProtocol& protocol() const { return protocol_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<AuxState>& states() const { return states_; }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  /// Cubic Hermite interpolation of (X, X', Y, Y') using the ODE for the
  /// second derivatives. Throws RangeError outside [t_begin, t_end].
  AuxState at(double t) const;

  /// Largest |W - 1| over the stored nodes, W = X'Y - XY'.
  double max_wronskian_drift() const;

 private:
  FrequencyProtocol protocol_;
  std::vector<double> times_;
  std::vector<AuxState> states_;
};

/// Classical RK4 over [0, tau]. The step is shrunk so that tau is hit exactly.
/// Requires 0 < dt <= tau/100; throws AccuracyError if the Wronskian drifts
/// by more than 1e-6.
AuxTrajectory solve_aux_ode(const FrequencyProtocol& protocol, double dt);

}  // namespace qsl
