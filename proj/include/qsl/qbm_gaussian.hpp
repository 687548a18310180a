#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qsl/grid.hpp"
#include "qsl/qbm.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Mean and covariance of a Gaussian Wigner function over (x, P).
struct GaussianMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();

  static GaussianMoments from(const GaussianSpec& spec);
  double density(double x, double p) const;
};

/// The QBM generator is linear with quadratic coefficients, so a Gaussian
/// stays Gaussian with
///   mean' = A mean,   cov' = A cov + cov A^T + 2 D,
///   A = [[0, 1/M], [-M w0^2, -gamma]],   D = [[0, D_xP/2], [D_xP/2, D_PP]].
GaussianMoments gaussian_moments_rate(const GaussianMoments& m, const QbmCoefficients& c);

struct GaussianPath {
  std::vector<double> times;
  std::vector<GaussianMoments> moments;
  std::vector<GaussianMoments> rates;  ///< d/dt of mean and covariance
};

/// RK4 integration of the moment equations, reporting at the given
/// increasing times (first must be 0). max_step bounds the internal step.
GaussianPath qbm_gaussian_path(const GaussianMoments& initial, const QbmCoefficients& c,
                               const std::vector<double>& times, double max_step);

/// Uniform output times plus a geometric cluster near t = 0 that resolves the
/// initial diffusive transient of width `t_fast`.
std::vector<double> graded_times(double t_final, std::size_t uniform_steps, double t_fast,
                                 std::size_t per_decade = 40);

/// Grid centred on the mean spanning +-half_width_sigmas standard deviations.
PhaseGrid comoving_grid(const GaussianMoments& m, std::size_t n, double half_width_sigmas = 9.0);

RealField sample_gaussian(const GaussianMoments& m, const PhaseGrid& grid);

/// dW/dt of the Gaussian with moments m and moment rates dm, sampled.
RealField sample_gaussian_rate(const GaussianMoments& m, const GaussianMoments& dm,
                               const PhaseGrid& grid);

/// Wasserstein-1 distance of two Gaussians, computed as 2 - 2*integral min(a, b)
/// on the overlap box of both supports.
double gaussian_l1_distance(const GaussianMoments& a, const GaussianMoments& b, std::size_t n = 512);

}  // namespace qsl
