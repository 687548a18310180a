#include "qsl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

UniformGrid1D::UniformGrid1D(double min, double max, std::size_t n)
    : min_(min), max_(max), n_(n), spacing_(0.0) {
  if (n < 2) throw ArgumentError("grid needs at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
    throw ArgumentError("grid requires finite bounds with max > min");
  }
  spacing_ = (max - min) / static_cast<double>(n - 1);
}

Eigen::VectorXd UniformGrid1D::points() const {
  Eigen::VectorXd pts(static_cast<Eigen::Index>(n_));
  for (std::size_t k = 0; k < n_; ++k) pts(static_cast<Eigen::Index>(k)) = (*this)[k];
  return pts;
}

bool UniformGrid1D::matches(const UniformGrid1D& other, double rel_tol) const {
  if (n_ != other.n_) return false;
  const double scale = std::max({std::abs(min_), std::abs(max_), spacing_});
  return std::abs(min_ - other.min_) <= rel_tol * scale &&
         std::abs(max_ - other.max_) <= rel_tol * scale;
}

void require_shape(const RealField& f, const PhaseGrid& grid, const char* what) {
  if (static_cast<std::size_t>(f.rows()) != grid.x().size() ||
      static_cast<std::size_t>(f.cols()) != grid.p().size()) {
    std::ostringstream os;
    os << what << ": field is " << f.rows() << "x" << f.cols() << ", grid is "
       << grid.x().size() << "x" << grid.p().size();
    throw ShapeError(os.str());
  }
}

double integrate_2d(const RealField& f, const PhaseGrid& grid) {
  require_shape(f, grid, "integrate_2d");
  return grid.cell_area() * f.sum();
}

}  // namespace qsl
