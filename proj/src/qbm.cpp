#include "qsl/qbm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

double QbmParams::d_pp() const {
  return mass * gamma / beta +
         mass * beta * gamma * hbar * hbar * (omega0 * omega0 - gamma * gamma) / 12.0;
}

double QbmParams::d_xp() const { return beta * gamma * hbar * hbar / 12.0; }

void QbmParams::validate_shape() const {
  if (!(gamma >= 0.0) || !(beta > 0.0) || !(mass > 0.0) || !(hbar > 0.0) || !(omega0 > 0.0)) {
    throw ArgumentError("QBM parameters need gamma >= 0 and beta, M, hbar, omega0 > 0");
  }
}

void QbmParams::validate() const {
  validate_shape();
  if (!(gamma > 0.0)) throw ArgumentError("QBM damping gamma must be positive");
  if (const double d = d_pp(); !(d > 0.0)) {
    std::ostringstream os;
    os << "D_PP = " << d << " <= 0 at beta=" << beta << ", gamma=" << gamma
       << ": outside the high-temperature regime of the master equation";
    throw DomainError(os.str());
  }
}

QbmCoefficients QbmCoefficients::from(const QbmParams& params) {
  params.validate();
  return {params.gamma, params.d_pp(), params.d_xp(), params.mass, params.omega0};
}

QbmCoefficients QbmCoefficients::liouville(double mass, double omega0) {
  if (!(mass > 0.0) || !(omega0 > 0.0)) throw ArgumentError("mass and omega0 must be positive");
  return {0.0, 0.0, 0.0, mass, omega0};
}

namespace {

// Raw stencil without precondition checks; `out` must be sized like w.
void apply_generator(const Eigen::MatrixXd& w, const PhaseGrid& grid, const QbmCoefficients& c,
                     Eigen::MatrixXd& out) {
  const Eigen::Index nx = w.rows();
  const Eigen::Index np = w.cols();
  const double dx = grid.x().spacing();
  const double dp = grid.p().spacing();
  const double x0 = grid.x().min();
  const double p0 = grid.p().min();
  const double k2 = c.mass * c.omega0 * c.omega0;

  auto at = [&](Eigen::Index i, Eigen::Index k) -> double {
    return (i < 0 || i >= nx || k < 0 || k >= np) ? 0.0 : w(i, k);
  };

  const double inv2dx = 1.0 / (2.0 * dx);
  const double inv2dp = 1.0 / (2.0 * dp);
  const double invdp2 = 1.0 / (dp * dp);
  const double inv4dxdp = 1.0 / (4.0 * dx * dp);

  for (Eigen::Index k = 0; k < np; ++k) {
    const double p = p0 + static_cast<double>(k) * dp;
    const double p_up = p + dp;
    const double p_dn = p - dp;
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double x = x0 + static_cast<double>(i) * dx;
      const double c0 = w(i, k);
      const double xu = at(i + 1, k);
      const double xd = at(i - 1, k);
      const double pu = at(i, k + 1);
      const double pd = at(i, k - 1);

      double r = -(p / c.mass) * (xu - xd) * inv2dx;
      r += k2 * x * (pu - pd) * inv2dp;
      r += c.gamma * (p_up * pu - p_dn * pd) * inv2dp;
      r += c.d_pp * (pu - 2.0 * c0 + pd) * invdp2;
      if (c.d_xp != 0.0) {
        r += c.d_xp * (at(i + 1, k + 1) - at(i + 1, k - 1) - at(i - 1, k + 1) + at(i - 1, k - 1)) *
             inv4dxdp;
      }
      out(i, k) = r;
    }
  }
}

void require_negligible_boundary(const Eigen::MatrixXd& w, const char* what) {
  if (const double ratio = boundary_ratio(w); ratio > 1e-8) {
    std::ostringstream os;
    os << what << ": boundary amplitude ratio " << ratio << " exceeds 1e-8; enlarge the domain";
    throw DomainError(os.str());
  }
}

}  // namespace

RealField qbm_rhs(const WignerField& w, const QbmCoefficients& coeffs) {
  require_shape(w.values, w.grid, "qbm_rhs");
  require_negligible_boundary(w.values, "qbm_rhs");
  RealField out(w.values.rows(), w.values.cols());
  apply_generator(w.values, w.grid, coeffs, out);
  return out;
}

RealField qbm_rhs(const WignerField& w, const QbmParams& params) {
  return qbm_rhs(w, QbmCoefficients::from(params));
}

double qbm_stable_dt(const PhaseGrid& grid, const QbmCoefficients& c) {
  const double p_max = std::max(std::abs(grid.p().min()), std::abs(grid.p().max()));
  const double x_max = std::max(std::abs(grid.x().min()), std::abs(grid.x().max()));
  double dt = grid.x().spacing() / (p_max / c.mass);
  dt = std::min(dt, grid.p().spacing() / (c.mass * c.omega0 * c.omega0 * x_max + c.gamma * p_max));
  if (c.d_pp > 0.0) dt = std::min(dt, grid.p().spacing() * grid.p().spacing() / (2.0 * c.d_pp));
  return 0.4 * dt;
}

std::vector<WignerField> qbm_evolve(const WignerField& w0, const QbmCoefficients& coeffs,
                                    double t_final, const QbmEvolveOptions& options) {
  require_shape(w0.values, w0.grid, "qbm_evolve");
  if (!(t_final >= 0.0)) throw ArgumentError("t_final must be non-negative");
  if (t_final == 0.0) return {w0};
  if (!(options.dt > 0.0)) throw ArgumentError("time step must be positive");
  if (options.snapshot_stride == 0) throw ArgumentError("snapshot stride must be positive");
  require_negligible_boundary(w0.values, "qbm_evolve");

  const double norm0 = w0.norm();
  if (std::abs(norm0 - 1.0) > options.norm_tolerance) {
    std::ostringstream os;
    os << "qbm_evolve: initial state normalized to " << norm0;
    throw ArgumentError(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::llround(t_final / options.dt));
  if (steps == 0 || std::abs(static_cast<double>(steps) * options.dt - t_final) > 1e-9 * t_final) {
    throw ArgumentError("t_final must be a whole number of time steps");
  }
  const double dt = options.dt;
  const double mass0 = w0.values.cwiseAbs().sum();

  const auto nx = w0.values.rows();
  const auto np = w0.values.cols();
  Eigen::MatrixXd w = w0.values;
  Eigen::MatrixXd k1(nx, np), k2(nx, np), k3(nx, np), k4(nx, np), tmp(nx, np);

  std::vector<WignerField> snapshots;
  snapshots.push_back(w0);

  for (std::size_t n = 1; n <= steps; ++n) {
    apply_generator(w, w0.grid, coeffs, k1);
    tmp = w + 0.5 * dt * k1;
    apply_generator(tmp, w0.grid, coeffs, k2);
    tmp = w + 0.5 * dt * k2;
    apply_generator(tmp, w0.grid, coeffs, k3);
    tmp = w + dt * k3;
    apply_generator(tmp, w0.grid, coeffs, k4);
    w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double mass = w.cwiseAbs().sum();
    if (!std::isfinite(mass) || mass > mass0 * (1.0 + options.growth_limit)) {
      std::ostringstream os;
      os << "QBM evolution unstable at dt=" << dt << " (L1 mass grew by "
         << (mass / mass0 - 1.0) * 100.0 << "% by t=" << static_cast<double>(n) * dt << ")";
      throw StabilityError(os.str());
    }

    if (n % options.snapshot_stride == 0 || n == steps) {
      const double t = (n == steps) ? t_final : static_cast<double>(n) * dt;
      WignerField snap{w0.grid, w, w0.time + t, w0.hbar};
      require_negligible_boundary(snap.values, "qbm_evolve");
      if (const double norm = snap.norm(); std::abs(norm - 1.0) > options.norm_tolerance) {
        std::ostringstream os;
        os << "QBM normalization drifted to " << norm << " at t=" << t;
        throw NumericalError(os.str());
      }
      snapshots.push_back(std::move(snap));
    }
  }
  return snapshots;
}

std::vector<WignerField> qbm_evolve(const WignerField& w0, const QbmParams& params,
                                    double t_final, double dt, std::size_t snapshot_stride) {
  QbmEvolveOptions options;
  options.dt = dt;
  options.snapshot_stride = snapshot_stride;
  return qbm_evolve(w0, QbmCoefficients::from(params), t_final, options);
}

std::vector<WignerField> qbm_evolve_auto(const WignerField& w0, const QbmParams& params,
                                         double t_final, std::size_t output_steps,
                                         double dt_hint, double* dt_used) {
  const QbmCoefficients coeffs = QbmCoefficients::from(params);
  if (!(t_final > 0.0)) throw ArgumentError("t_final must be positive");
  if (output_steps == 0) throw ArgumentError("need at least one output step");
  const double interval = t_final / static_cast<double>(output_steps);
  const double dt0 = dt_hint > 0.0 ? dt_hint : qbm_stable_dt(w0.grid, coeffs);
  auto substeps = static_cast<std::size_t>(std::ceil(interval / dt0 - 1e-9));

  for (int attempt = 0;; ++attempt) {
    QbmEvolveOptions options;
    options.dt = interval / static_cast<double>(substeps);
    options.snapshot_stride = substeps;
    try {
      auto out = qbm_evolve(w0, coeffs, t_final, options);
      if (dt_used) *dt_used = options.dt;
      return out;
    } catch (const StabilityError&) {
      if (attempt >= 6) throw;
      substeps *= 2;
    }
  }
}

}  // namespace qsl
