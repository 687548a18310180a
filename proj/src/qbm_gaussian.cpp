#include "qsl/qbm_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsl/errors.hpp"

namespace qsl {

using std::numbers::pi;

GaussianMoments GaussianMoments::from(const GaussianSpec& spec) {
  spec.validate();
  GaussianMoments m;
  m.mean << spec.mu_x, spec.mu_p;
  m.cov << spec.sigma_x * spec.sigma_x, 0.0, 0.0, spec.sigma_p * spec.sigma_p;
  return m;
}

double GaussianMoments::density(double x, double p) const {
  const Eigen::Vector2d u(x - mean(0), p - mean(1));
  const double q = u.dot(cov.ldlt().solve(u));
  return std::exp(-0.5 * q) / (2.0 * pi * std::sqrt(cov.determinant()));
}

GaussianMoments gaussian_moments_rate(const GaussianMoments& m, const QbmCoefficients& c) {
  Eigen::Matrix2d a;
  a << 0.0, 1.0 / c.mass, -c.mass * c.omega0 * c.omega0, -c.gamma;
  Eigen::Matrix2d d;
  d << 0.0, 0.5 * c.d_xp, 0.5 * c.d_xp, c.d_pp;
  GaussianMoments r;
  r.mean = a * m.mean;
  r.cov = a * m.cov + m.cov * a.transpose() + 2.0 * d;
  return r;
}

namespace {

GaussianMoments axpy(const GaussianMoments& m, double h, const GaussianMoments& r) {
  GaussianMoments out;
  out.mean = m.mean + h * r.mean;
  out.cov = m.cov + h * r.cov;
  return out;
}

GaussianMoments rk4_step(const GaussianMoments& m, double h, const QbmCoefficients& c) {
  const GaussianMoments k1 = gaussian_moments_rate(m, c);
  const GaussianMoments k2 = gaussian_moments_rate(axpy(m, 0.5 * h, k1), c);
  const GaussianMoments k3 = gaussian_moments_rate(axpy(m, 0.5 * h, k2), c);
  const GaussianMoments k4 = gaussian_moments_rate(axpy(m, h, k3), c);
  GaussianMoments out;
  out.mean = m.mean + h / 6.0 * (k1.mean + 2 * k2.mean + 2 * k3.mean + k4.mean);
  out.cov = m.cov + h / 6.0 * (k1.cov + 2 * k2.cov + 2 * k3.cov + k4.cov);
  return out;
}

}  // namespace

GaussianPath qbm_gaussian_path(const GaussianMoments& initial, const QbmCoefficients& c,
                               const std::vector<double>& times, double max_step) {
  if (times.empty() || times.front() != 0.0) throw ArgumentError("output times must start at 0");
  if (!(max_step > 0.0)) throw ArgumentError("max_step must be positive");
  GaussianPath path;
  GaussianMoments m = initial;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw ArgumentError("output times must increase");
    const double span = target - t;
    if (span > 0.0) {
      const auto n = static_cast<std::size_t>(std::ceil(span / max_step));
      const double h = span / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) m = rk4_step(m, h, c);
    }
    t = target;
    if (m.cov.determinant() <= 0.0 || m.cov(0, 0) <= 0.0) {
      throw NumericalError("Gaussian covariance lost positivity");
    }
    path.times.push_back(t);
    path.moments.push_back(m);
    path.rates.push_back(gaussian_moments_rate(m, c));
  }
  return path;
}

std::vector<double> graded_times(double t_final, std::size_t uniform_steps, double t_fast,
                                 std::size_t per_decade) {
  if (!(t_final > 0.0) || uniform_steps == 0) throw ArgumentError("need t_final > 0 and steps > 0");
  std::vector<double> times;
  for (std::size_t k = 0; k <= uniform_steps; ++k) {
    times.push_back(t_final * static_cast<double>(k) / static_cast<double>(uniform_steps));
  }
  const double first = times[1];
  const double t_min = std::min(first, t_fast / 8.0);
  if (t_min < first && t_min > 0.0) {
    const double ratio = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
    for (double t = t_min; t < first; t *= ratio) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

PhaseGrid comoving_grid(const GaussianMoments& m, std::size_t n, double half_width_sigmas) {
  const double sx = std::sqrt(m.cov(0, 0));
  const double sp = std::sqrt(m.cov(1, 1));
  return PhaseGrid(UniformGrid1D(m.mean(0) - half_width_sigmas * sx, m.mean(0) + half_width_sigmas * sx, n),
                   UniformGrid1D(m.mean(1) - half_width_sigmas * sp, m.mean(1) + half_width_sigmas * sp, n));
}

namespace {

template <class F>
RealField sample(const PhaseGrid& grid, F&& f) {
  RealField out(static_cast<Eigen::Index>(grid.x().size()), static_cast<Eigen::Index>(grid.p().size()));
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    const double p = grid.p()[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, k) = f(grid.x()[static_cast<std::size_t>(i)], p);
  }
  return out;
}

}  // namespace

RealField sample_gaussian(const GaussianMoments& m, const PhaseGrid& grid) {
  const Eigen::Matrix2d prec = m.cov.inverse();
  const double norm = 1.0 / (2.0 * pi * std::sqrt(m.cov.determinant()));
  return sample(grid, [&](double x, double p) {
    const Eigen::Vector2d u(x - m.mean(0), p - m.mean(1));
    return norm * std::exp(-0.5 * u.dot(prec * u));
  });
}

RealField sample_gaussian_rate(const GaussianMoments& m, const GaussianMoments& dm,
                               const PhaseGrid& grid) {
  const Eigen::Matrix2d prec = m.cov.inverse();
  const Eigen::Matrix2d quad = prec * dm.cov * prec;
  const Eigen::Vector2d lin = prec * dm.mean;
  const double trace_term = 0.5 * (prec * dm.cov).trace();
  const double norm = 1.0 / (2.0 * pi * std::sqrt(m.cov.determinant()));
  return sample(grid, [&](double x, double p) {
    const Eigen::Vector2d u(x - m.mean(0), p - m.mean(1));
    const double w = norm * std::exp(-0.5 * u.dot(prec * u));
    return w * (lin.dot(u) + 0.5 * u.dot(quad * u) - trace_term);
  });
}

double gaussian_l1_distance(const GaussianMoments& a, const GaussianMoments& b, std::size_t n) {
  constexpr double reach = 9.0;
  double lo[2], hi[2];
  for (int d = 0; d < 2; ++d) {
    const double sa = std::sqrt(a.cov(d, d));
    const double sb = std::sqrt(b.cov(d, d));
    lo[d] = std::max(a.mean(d) - reach * sa, b.mean(d) - reach * sb);
    hi[d] = std::min(a.mean(d) + reach * sa, b.mean(d) + reach * sb);
    if (!(hi[d] > lo[d])) return 2.0;
  }
  const PhaseGrid box(UniformGrid1D(lo[0], hi[0], n), UniformGrid1D(lo[1], hi[1], n));
  const RealField overlap = sample_gaussian(a, box).cwiseMin(sample_gaussian(b, box));
  return std::max(0.0, 2.0 - 2.0 * integrate_2d(overlap, box));
}

}  // namespace qsl
