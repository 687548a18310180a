#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsl/grid.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Exponent of a Schatten or Wasserstein norm, p in [1, inf].
class PNorm {
 public:
  static PNorm finite(double p);
  static PNorm infinity() { return PNorm(0.0, true); }
  /// Parses "1", "2.5", "inf".
  static PNorm parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  double value() const { return value_; }
  /// "1", "2", "inf" - used in column names.
  std::string label() const;

  friend bool operator==(const PNorm&, const PNorm&) = default;

 private:
  PNorm(double p, bool inf) : value_(p), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Power mean of non-negative values, (sum v^p)^(1/p) or max for p = inf.
double p_sum(std::span<const double> values, PNorm p);

/// Operator singular values spacing * sigma_k of a kernel sample matrix.
Eigen::VectorXd operator_singular_values(const ComplexMatrix& samples, double spacing);

double schatten_norm(const ComplexMatrix& samples, double spacing, PNorm p);
/// All requested norms from a single SVD.
std::vector<double> schatten_norms(const ComplexMatrix& samples, double spacing,
                                   std::span<const PNorm> ps);

double schatten_distance(const DensityKernel& a, const DensityKernel& b, PNorm p);

double wasserstein_norm(const RealField& f, const PhaseGrid& grid, PNorm p);
std::vector<double> wasserstein_norms(const RealField& f, const PhaseGrid& grid,
                                      std::span<const PNorm> ps);
double wasserstein_distance(const WignerField& a, const WignerField& b, PNorm p);

/// <psi0|rho_t|psi0> = spacing^2 Re tr(rho0 rho_t) for a pure reference rho0.
/// Throws ArgumentError when the reference purity is off by more than 1e-6.
double pure_fidelity(const DensityKernel& psi0_kernel, const DensityKernel& rho_t);

/// arccos(sqrt F). F in (1, 1+1e-6] is clamped, anything further out throws.
double bures_angle(double fidelity);
/// sqrt(2 (1 - sqrt F)).
double bures_distance(double fidelity);

/// 1 - sqrt F <= l1/2 <= sqrt(1 - F), each side with slack tol.
bool continuity_check(double fidelity, double l1, double tol = 1e-6);

}  // namespace qsl
