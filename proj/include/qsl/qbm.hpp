#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsl/grid.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Quantum Brownian motion of a harmonic oscillator in the Wigner picture:
///
///   dW/dt = [ -P/M d_x + M w0^2 x d_P + d_P (gamma P + D_PP d_P) + D_xP d_x d_P ] W
///
/// with D_PP = M gamma / beta + M beta gamma hbar^2 (w0^2 - gamma^2) / 12 and
/// D_xP = beta gamma hbar^2 / 12. beta = 1/(k_B T), k_B = 1.
struct QbmParams {
  double gamma = 2.0;
  double beta = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  double omega0 = 1.0;

  double d_pp() const;
  double d_xp() const;

  /// Throws ArgumentError on non-positive inputs and DomainError when
  /// D_PP <= 0 (outside the high-temperature validity of the equation).
  void validate() const;
  /// Like validate() but tolerates gamma = 0 and forced zero diffusion.
  void validate_shape() const;
};

/// Optional coefficient override, used for the closed (Liouville) limit.
struct QbmCoefficients {
  double gamma;
  double d_pp;
  double d_xp;
  double mass;
  double omega0;

  static QbmCoefficients from(const QbmParams& params);
  static QbmCoefficients liouville(double mass, double omega0);
};

/// Second-order central differences with zero ghost values outside the
/// domain; friction differenced in flux form d_P(gamma P W). Throws
/// DomainError if the boundary carries more than 1e-8 of the peak.
RealField qbm_rhs(const WignerField& w, const QbmParams& params);
RealField qbm_rhs(const WignerField& w, const QbmCoefficients& coeffs);

/// 0.4 * min(dx/(P_max/M), dP/(M w0^2 x_max + gamma P_max), dP^2/(2 D_PP)).
double qbm_stable_dt(const PhaseGrid& grid, const QbmCoefficients& coeffs);

struct QbmEvolveOptions {
  double dt = 0.0;                  ///< RK4 step; must be > 0
  std::size_t snapshot_stride = 1;  ///< keep every stride-th step (plus the last)
  double norm_tolerance = 1e-5;     ///< allowed |integral W - 1| per snapshot
  double growth_limit = 0.01;       ///< allowed relative growth of integral |W|
};

/// Explicit RK4 in time. Returns snapshots at t = 0, stride*dt, ..., t_final;
/// t_final must be a whole number of steps. Throws StabilityError when the L1
/// mass grows by more than growth_limit and NumericalError on normalization
/// drift.
std::vector<WignerField> qbm_evolve(const WignerField& w0, const QbmCoefficients& coeffs,
                                    double t_final, const QbmEvolveOptions& options);
std::vector<WignerField> qbm_evolve(const WignerField& w0, const QbmParams& params,
                                    double t_final, double dt, std::size_t snapshot_stride = 1);

/// qbm_evolve with dt = qbm_stable_dt rounded so that output_interval is a
/// whole number of steps, halving dt on StabilityError (at most 6 times).
/// Snapshots are returned every output_interval.
std::vector<WignerField> qbm_evolve_auto(const WignerField& w0, const QbmParams& params,
                                         double t_final, std::size_t output_steps,
                                         double dt_hint = 0.0, double* dt_used = nullptr);

}  // namespace qsl
