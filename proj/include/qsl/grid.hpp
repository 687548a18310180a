#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace qsl {

/// Closed uniform grid min + k*spacing, k = 0..n-1, both endpoints included.
class UniformGrid1D {
 public:
  UniformGrid1D(double min, double max, std::size_t n);

  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }

  double operator[](std::size_t k) const { return min_ + static_cast<double>(k) * spacing_; }
  Eigen::VectorXd points() const;

  /// Same node set up to a relative tolerance on the bounds.
  bool matches(const UniformGrid1D& other, double rel_tol = 1e-12) const;

 private:
  double min_;
  double max_;
  std::size_t n_;
  double spacing_;
};

/// Product grid over phase space, rows index x and columns index p.
class PhaseGrid {
 public:
  PhaseGrid(UniformGrid1D x, UniformGrid1D p) : x_(x), p_(p) {}

  const UniformGrid1D& x() const { return x_; }
  const UniformGrid1D& p() const { return p_; }
  double cell_area() const { return x_.spacing() * p_.spacing(); }

  bool matches(const PhaseGrid& other, double rel_tol = 1e-12) const {
    return x_.matches(other.x_, rel_tol) && p_.matches(other.p_, rel_tol);
  }

 private:
  UniformGrid1D x_;
  UniformGrid1D p_;
};

using RealField = Eigen::MatrixXd;

/// Rectangle rule with full weight on every node: cell_area * sum(f).
double integrate_2d(const RealField& f, const PhaseGrid& grid);

/// Throws ShapeError unless f is x.size() by p.size().
void require_shape(const RealField& f, const PhaseGrid& grid, const char* what);

}  // namespace qsl
