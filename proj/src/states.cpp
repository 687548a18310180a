#include "qsl/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

using std::numbers::pi;

void OscillatorParams::validate() const {
  if (!(mass > 0.0) || !(hbar > 0.0) || !(omega0 > 0.0) || !(omega1 > 0.0)) {
    throw ArgumentError("oscillator parameters M, hbar, omega0, omega1 must be positive");
  }
}

void GaussianSpec::validate() const {
  if (!(sigma_x > 0.0) || !(sigma_p > 0.0)) {
    throw ArgumentError("Gaussian widths must be positive");
  }
}

double DensityKernel::trace() const {
  return grid.spacing() * values.diagonal().real().sum();
}

double DensityKernel::purity() const {
  const double h = grid.spacing();
  return h * h * values.squaredNorm();
}

double DensityKernel::hermiticity_defect() const {
  return (values - values.adjoint()).cwiseAbs().maxCoeff();
}

double DensityKernel::min_eigenvalue() const {
  const ComplexMatrix op = grid.spacing() * 0.5 * (values + values.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

void DensityKernel::check_invariants() const {
  std::ostringstream os;
  if (const double h = hermiticity_defect(); h > 1e-10) {
    os << "kernel not Hermitian (defect " << h << ")";
  } else if (const double tr = trace(); std::abs(tr - 1.0) > 1e-6) {
    os << "kernel trace " << tr << " differs from 1";
  } else if (const double ev = min_eigenvalue(); ev < -1e-8) {
    os << "kernel has negative eigenvalue " << ev;
  } else {
    return;
  }
  throw NumericalError(os.str());
}

double WignerField::purity() const {
  return 2.0 * pi * hbar * integrate_2d(values.cwiseAbs2(), grid);
}

double boundary_ratio(const Eigen::MatrixXd& values) {
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  const auto r = values.rows() - 1;
  const auto c = values.cols() - 1;
  const double edge = std::max({values.row(0).cwiseAbs().maxCoeff(), values.row(r).cwiseAbs().maxCoeff(),
                                values.col(0).cwiseAbs().maxCoeff(), values.col(c).cwiseAbs().maxCoeff()});
  return edge / peak;
}

double boundary_ratio(const ComplexMatrix& values) {
  return boundary_ratio(Eigen::MatrixXd(values.cwiseAbs()));
}

Eigen::VectorXcd ground_state_wavefunction(const OscillatorParams& params,
                                           const UniformGrid1D& grid) {
  params.validate();
  const double a = params.mass * params.omega0 / params.hbar;
  const double norm = std::pow(a / pi, 0.25);
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    psi(static_cast<Eigen::Index>(i)) = norm * std::exp(-0.5 * a * x * x);
  }
  return psi;
}

namespace {

DensityKernel outer_kernel(const Eigen::VectorXcd& psi, const UniformGrid1D& grid, double t) {
  return DensityKernel{grid, psi * psi.adjoint(), t};
}

void require_localized(const Eigen::VectorXcd& psi, const char* what) {
  const double peak = psi.cwiseAbs2().maxCoeff();
  const double edge = std::max(std::norm(psi(0)), std::norm(psi(psi.size() - 1)));
  if (edge > 1e-6 * peak) {
    std::ostringstream os;
    os << what << ": grid too narrow, boundary density ratio " << edge / peak;
    throw DomainError(os.str());
  }
}

}  // namespace

DensityKernel ground_state_kernel(const OscillatorParams& params, const UniformGrid1D& grid) {
  const Eigen::VectorXcd psi = ground_state_wavefunction(params, grid);
  require_localized(psi, "ground_state_kernel");
  return outer_kernel(psi, grid, 0.0);
}

std::complex<double> parametric_width(const OscillatorParams& params, const AuxState& s) {
  const double w0 = params.omega0;
  const double spread = s.y * s.y + w0 * w0 * s.x * s.x;
  const double chirp = w0 * w0 * s.dx * s.x + s.dy * s.y;
  const double scale = params.mass * w0 / (2.0 * params.hbar * spread);
  return {scale, -scale * chirp / w0};
}

DensityKernel parametric_kernel(const OscillatorParams& params, const AuxTrajectory& traj,
                                double t, const UniformGrid1D& grid) {
  params.validate();
  const AuxState s = traj.at(t);
  const std::complex<double> alpha = parametric_width(params, s);
  const double norm = std::pow(2.0 * alpha.real() / pi, 0.25);

  Eigen::VectorXcd psi(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    psi(static_cast<Eigen::Index>(i)) = norm * std::exp(-alpha * (x * x));
  }
  require_localized(psi, "parametric_kernel");

  DensityKernel kernel = outer_kernel(psi, grid, t);
  if (const double tr = kernel.trace(); std::abs(tr - 1.0) > 1e-4) {
    std::ostringstream os;
    os << "parametric kernel trace drifted to " << tr << " at t=" << t;
    throw NumericalError(os.str());
  }
  return kernel;
}

WignerField gaussian_wigner(const GaussianSpec& spec, const PhaseGrid& grid, double hbar) {
  spec.validate();
  const auto nx = static_cast<Eigen::Index>(grid.x().size());
  const auto np = static_cast<Eigen::Index>(grid.p().size());
  const double peak = 1.0 / (2.0 * pi * spec.sigma_x * spec.sigma_p);

  Eigen::VectorXd gx(nx), gp(np);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double u = (grid.x()[static_cast<std::size_t>(i)] - spec.mu_x) / spec.sigma_x;
    gx(i) = std::exp(-0.5 * u * u);
  }
  for (Eigen::Index k = 0; k < np; ++k) {
    const double u = (grid.p()[static_cast<std::size_t>(k)] - spec.mu_p) / spec.sigma_p;
    gp(k) = std::exp(-0.5 * u * u);
  }

  WignerField w{grid, peak * gx * gp.transpose(), 0.0, hbar};
  if (const double ratio = boundary_ratio(w.values); ratio > 1e-6) {
    std::ostringstream os;
    os << "gaussian_wigner: grid too narrow, boundary ratio " << ratio;
    throw DomainError(os.str());
  }
  return w;
}

}  // namespace qsl
