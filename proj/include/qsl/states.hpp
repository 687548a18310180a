#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qsl/grid.hpp"
#include "qsl/protocol.hpp"

namespace qsl {

using ComplexMatrix = Eigen::MatrixXcd;

struct OscillatorParams {
  double mass = 1.0;
  double hbar = 1.0;
  double omega0 = 1.0;
  double omega1 = 2.0;

  void validate() const;
};

/// Parameters of a product Gaussian in phase space.
struct GaussianSpec {
  double mu_x = 0.0;
  double sigma_x = 1.0;
  double mu_p = 0.0;
  double sigma_p = 1.0;

  void validate() const;
};

/// Position-space density kernel rho(x_i, x_j) sampled on grid x grid.
/// The operator it represents has matrix spacing * values.
struct DensityKernel {
  UniformGrid1D grid;
  ComplexMatrix values;
  double time = 0.0;

  double trace() const;
  /// spacing^2 * sum |rho_ij|^2
  double purity() const;
  double hermiticity_defect() const;
  /// Smallest eigenvalue of spacing * values (dense, O(n^3)).
  double min_eigenvalue() const;
  /// Hermiticity 1e-10, trace 1e-6, positivity -1e-8. Throws NumericalError.
  void check_invariants() const;
};

/// Wigner function W(x_i, p_k); rows index x, columns index p.
struct WignerField {
  PhaseGrid grid;
  Eigen::MatrixXd values;
  double time = 0.0;
  double hbar = 1.0;

  double norm() const { return integrate_2d(values, grid); }
  /// (2 pi hbar) * integral of W^2
  double purity() const;
};

/// Wave function of the oscillator ground state sampled on the grid.
Eigen::VectorXcd ground_state_wavefunction(const OscillatorParams& params,
                                           const UniformGrid1D& grid);

/// psi0(x) psi0(y)* for the ground state of frequency omega0.
/// Throws DomainError when the boundary density exceeds 1e-6 of the peak.
DensityKernel ground_state_kernel(const OscillatorParams& params, const UniformGrid1D& grid);

/// Exact kernel of the driven oscillator started in the omega0 ground state,
/// evaluated from the auxiliary solutions at time t. Throws RangeError if t is
/// outside the trajectory and NumericalError if the trace drifts beyond 1e-4.
DensityKernel parametric_kernel(const OscillatorParams& params, const AuxTrajectory& traj,
                                double t, const UniformGrid1D& grid);

/// Gaussian exp(-alpha x^2) amplitude for the state at t, with the complex
/// width alpha = (M omega0 / 2 hbar D) (1 - i c / omega0), D = Y^2 + omega0^2 X^2,
/// c = omega0^2 X' X + Y' Y.
std::complex<double> parametric_width(const OscillatorParams& params, const AuxState& s);

/// Product Gaussian sampled at the nodes. Throws DomainError when the grid
/// boundary carries more than 1e-6 of the peak value.
WignerField gaussian_wigner(const GaussianSpec& spec, const PhaseGrid& grid, double hbar = 1.0);

/// Largest |value| on the outer rows/columns relative to the largest |value|.
double boundary_ratio(const Eigen::MatrixXd& values);
double boundary_ratio(const ComplexMatrix& values);

}  // namespace qsl
