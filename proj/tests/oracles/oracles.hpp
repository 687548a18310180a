#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/math/special_functions/airy.hpp>

#include "qsl/grid.hpp"
#include "qsl/protocol.hpp"
#include "qsl/states.hpp"

namespace oracle {

using cd = std::complex<double>;
using qsl::ComplexMatrix;
using qsl::UniformGrid1D;
inline constexpr double pi = std::numbers::pi;

// Riemann sum of (1/pi hbar) int dy rho(x+y, x-y) exp(-2ipy/hbar) on the
// half-step rows, one term per kernel pair, no FFT.
inline Eigen::MatrixXd direct_wigner(const ComplexMatrix& rho, const UniformGrid1D& g,
                                     const UniformGrid1D& pgrid, double hbar) {
  const long n = static_cast<long>(g.size());
  const double h = g.spacing();
  Eigen::MatrixXd w(2 * n - 1, pgrid.size());
  for (long j = 0; j < 2 * n - 1; ++j) {
    for (std::size_t k = 0; k < pgrid.size(); ++k) {
      const double p = pgrid[k];
      cd acc = 0.0;
      for (long a = 0; a < n; ++a) {
        const long b = j - a;
        if (b < 0 || b >= n) continue;
        const double y = 0.5 * static_cast<double>(a - b) * h;
        acc += rho(a, b) * std::exp(cd(0.0, -2.0 * p * y / hbar));
      }
      w(j, static_cast<long>(k)) = (h / (pi * hbar) * acc).real();
    }
  }
  return w;
}

// Singular values of B = spacing * A. Hermitian input goes through two-sided
// Jacobi SVD; otherwise B^dagger B is diagonalized and square-rooted.
inline Eigen::VectorXd sqrt_gram_eigenvalues(const ComplexMatrix& a, double spacing) {
  const ComplexMatrix b = spacing * a;
  if ((b - b.adjoint()).norm() <= 1e-14 * b.norm()) {
    return Eigen::JacobiSVD<ComplexMatrix>(b).singularValues();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b.adjoint() * b);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

inline double schatten_from_eigen(const ComplexMatrix& a, double spacing, double p) {
  const Eigen::VectorXd s = sqrt_gram_eigenvalues(a, spacing);
  if (std::isinf(p)) return s.maxCoeff();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

inline ComplexMatrix random_matrix(long n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = cd(d(rng), d(rng));
  return m;
}

// q'' + (a + b t) q = 0 with b != 0 solved with Airy functions of
// z = -(a + b t) / b^(2/3).
struct AiryAux {
  double a, b, c;  // c = cbrt(b)
  double ax, bx, ay, by;

  explicit AiryAux(const qsl::FrequencyProtocol& pr) {
    a = pr.omega0 * pr.omega0;
    b = (pr.omega1 * pr.omega1 - a) / pr.tau;
    c = std::cbrt(b);
    const double z0 = z(0.0);
    // q(0) = A Ai + B Bi, q'(0) = -c (A Ai' + B Bi'); Wronskian Ai Bi' - Ai' Bi = 1/pi
    const double ai = boost::math::airy_ai(z0), bi = boost::math::airy_bi(z0);
    const double aip = boost::math::airy_ai_prime(z0), bip = boost::math::airy_bi_prime(z0);
    auto solve = [&](double q0, double dq0, double& A, double& B) {
      const double r = -dq0 / c;
      A = pi * (q0 * bip - r * bi);
      B = pi * (r * ai - q0 * aip);
    };
    solve(0.0, 1.0, ax, bx);
    solve(1.0, 0.0, ay, by);
  }
  double z(double t) const { return -(a + b * t) / (c * c); }
  qsl::AuxState at(double t) const {
    const double zt = z(t);
    const double ai = boost::math::airy_ai(zt), bi = boost::math::airy_bi(zt);
    const double aip = boost::math::airy_ai_prime(zt), bip = boost::math::airy_bi_prime(zt);
    return {ax * ai + bx * bi, -c * (ax * aip + bx * bip), ay * ai + by * bi, -c * (ay * aip + by * bip)};
  }
};

// Gaussian exp(-alpha x^2) solves i hbar psi_t = H psi iff
//   alpha' = -i (2 hbar alpha^2 / M - M w^2 / (2 hbar)).
inline cd width_riccati_rate(cd alpha, double mass, double hbar, double omega_sq) {
  return cd(0.0, -1.0) * (2.0 * hbar * alpha * alpha / mass - mass * omega_sq / (2.0 * hbar));
}

// |<psi_a|psi_b>|^2 of two centred Gaussians exp(-alpha x^2), alpha_a real.
inline double gaussian_overlap(cd alpha_a, cd alpha_b) {
  return 2.0 * std::sqrt(alpha_a.real() * alpha_b.real()) / std::abs(std::conj(alpha_a) + alpha_b);
}

// First excited oscillator state and its Wigner function, M = hbar = omega = 1.
inline ComplexMatrix excited_kernel(const UniformGrid1D& g) {
  const long n = static_cast<long>(g.size());
  Eigen::VectorXd psi(n);
  for (long i = 0; i < n; ++i) {
    const double x = g[static_cast<std::size_t>(i)];
    psi(i) = std::sqrt(2.0) * std::pow(pi, -0.25) * x * std::exp(-0.5 * x * x);
  }
  return (psi * psi.transpose()).cast<cd>();
}

inline double excited_wigner(double x, double p) {
  const double r2 = x * x + p * p;
  return (2.0 * r2 - 1.0) * std::exp(-r2) / pi;
}

inline double ground_wigner(double x, double p, double mass, double omega, double hbar) {
  return std::exp(-mass * omega * x * x / hbar - p * p / (mass * omega * hbar)) / (pi * hbar);
}

// Thermal state of the oscillator: Gaussian with
//   <x^2> = hbar/(2 M w) coth(beta hbar w / 2),  <P^2> = M hbar w / 2 coth(...).
struct Gibbs {
  double var_x, var_p;
  Gibbs(double beta, double mass, double omega, double hbar) {
    const double coth = 1.0 / std::tanh(0.5 * beta * hbar * omega);
    var_x = hbar / (2.0 * mass * omega) * coth;
    var_p = mass * hbar * omega / 2.0 * coth;
  }
  double operator()(double x, double p) const {
    return std::exp(-0.5 * x * x / var_x - 0.5 * p * p / var_p) / (2.0 * pi * std::sqrt(var_x * var_p));
  }
};

}  // namespace oracle
