#include "qsl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "qsl/errors.hpp"

namespace qsl {

PNorm PNorm::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "norm exponent p=" << p << " unsupported, need 1 <= p <= inf";
    throw ArgumentError(os.str());
  }
  return PNorm(p, false);
}

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse norm exponent '" + text + "'");
  }
  if (used != text.size()) throw ArgumentError("cannot parse norm exponent '" + text + "'");
  return finite(p);
}

std::string PNorm::label() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os << value_;
  return os.str();
}

double p_sum(std::span<const double> values, PNorm p) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (p.is_infinite() || peak == 0.0) return peak;
  if (p.value() == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / peak, p.value());
  return peak * std::pow(s, 1.0 / p.value());
}

Eigen::VectorXd operator_singular_values(const ComplexMatrix& samples, double spacing) {
  if (samples.rows() != samples.cols()) throw ShapeError("Schatten norm needs a square matrix");
  if (samples.size() == 0) return Eigen::VectorXd();
  Eigen::VectorXd sv;
  if ((samples - samples.adjoint()).norm() <= 1e-14 * samples.norm()) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(samples, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    sv = es.eigenvalues().cwiseAbs();
    std::sort(sv.begin(), sv.end(), std::greater<>());
  } else {
    sv = Eigen::JacobiSVD<ComplexMatrix>(samples).singularValues();
  }
  if (!sv.allFinite()) throw NumericalError("SVD produced non-finite singular values");
  return spacing * sv;
}

std::vector<double> schatten_norms(const ComplexMatrix& samples, double spacing,
                                   std::span<const PNorm> ps) {
  const Eigen::VectorXd sv = operator_singular_values(samples, spacing);
  const std::span<const double> values(sv.data(), static_cast<std::size_t>(sv.size()));
  std::vector<double> out;
  out.reserve(ps.size());
  for (const PNorm& p : ps) out.push_back(p_sum(values, p));
  return out;
}

double schatten_norm(const ComplexMatrix& samples, double spacing, PNorm p) {
  return schatten_norms(samples, spacing, std::span<const PNorm>(&p, 1)).front();
}

double schatten_distance(const DensityKernel& a, const DensityKernel& b, PNorm p) {
  if (!a.grid.matches(b.grid)) throw ShapeError("schatten_distance: kernels live on different grids");
  return schatten_norm(a.values - b.values, a.grid.spacing(), p);
}

std::vector<double> wasserstein_norms(const RealField& f, const PhaseGrid& grid,
                                      std::span<const PNorm> ps) {
  require_shape(f, grid, "wasserstein_norm");
  const double area = grid.cell_area();
  const double peak = f.cwiseAbs().maxCoeff();
  std::vector<double> out;
  out.reserve(ps.size());
  for (const PNorm& p : ps) {
    if (p.is_infinite() || peak == 0.0) {
      out.push_back(peak);
    } else if (p.value() == 1.0) {
      out.push_back(area * f.cwiseAbs().sum());
    } else {
      const double s = (f.cwiseAbs() / peak).array().pow(p.value()).sum();
      out.push_back(peak * std::pow(area * s, 1.0 / p.value()));
    }
  }
  return out;
}

double wasserstein_norm(const RealField& f, const PhaseGrid& grid, PNorm p) {
  return wasserstein_norms(f, grid, std::span<const PNorm>(&p, 1)).front();
}

double wasserstein_distance(const WignerField& a, const WignerField& b, PNorm p) {
  if (!a.grid.matches(b.grid)) throw ShapeError("wasserstein_distance: fields live on different grids");
  return wasserstein_norm(a.values - b.values, a.grid, p);
}

double pure_fidelity(const DensityKernel& psi0_kernel, const DensityKernel& rho_t) {
  if (!psi0_kernel.grid.matches(rho_t.grid)) throw ShapeError("pure_fidelity: grid mismatch");
  if (const double purity = psi0_kernel.purity(); std::abs(purity - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "pure_fidelity needs a pure reference state, purity is " << purity;
    throw ArgumentError(os.str());
  }
  const double h = rho_t.grid.spacing();
  // tr(rho0 rho_t) = sum_ij rho0_ji rho_t_ij
  const std::complex<double> tr = (psi0_kernel.values.transpose().cwiseProduct(rho_t.values)).sum();
  return h * h * tr.real();
}

namespace {

double clamp_fidelity(double f) {
  if (!(f >= -1e-6 && f <= 1.0 + 1e-6)) {
    std::ostringstream os;
    os << "fidelity " << f << " outside [0, 1]";
    throw ArgumentError(os.str());
  }
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace

double bures_angle(double fidelity) { return std::acos(std::sqrt(clamp_fidelity(fidelity))); }

double bures_distance(double fidelity) {
  return std::sqrt(2.0 * (1.0 - std::sqrt(clamp_fidelity(fidelity))));
}

bool continuity_check(double fidelity, double l1, double tol) {
  const double f = std::clamp(fidelity, 0.0, 1.0);
  const double half = 0.5 * l1;
  return 1.0 - std::sqrt(f) <= half + tol && half <= std::sqrt(1.0 - f) + tol;
}

}  // namespace qsl
