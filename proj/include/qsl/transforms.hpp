#pragma once

#include "qsl/grid.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Phase grid on which the fast transform of a kernel on `xgrid` lands.
///
/// Rows sit on the half-step lattice x_min + j*h/2, j = 0..2n-2, which holds
/// every midpoint (x_a + x_b)/2 of the kernel grid; this makes the transform
/// invertible. Columns are the reciprocal momenta p_k = pi*hbar*k/(n*h),
/// k = -n/2..n/2-1. n must be even.
PhaseGrid wigner_phase_grid(const UniformGrid1D& xgrid, double hbar);

/// W(x,p) = 1/(pi hbar) * integral dy rho(x+y, x-y) exp(-2 i p y / hbar).
///
/// pgrid.x may be the full half-step lattice or any sub-lattice of it (the
/// kernel grid itself is one); pgrid.p must be the reciprocal momentum axis.
/// Throws ShapeError on incompatible grids and NumericalError if the discarded
/// imaginary part exceeds 1e-10.
WignerField wigner_transform(const DensityKernel& rho, const PhaseGrid& pgrid, double hbar);

/// Convenience overload using wigner_phase_grid(rho.grid, hbar).
WignerField wigner_transform(const DensityKernel& rho, double hbar);

/// Linear transform of an arbitrary (not necessarily Hermitian) kernel-shaped
/// matrix, e.g. a time derivative. Returns the complex result.
Eigen::MatrixXcd wigner_transform_complex(const ComplexMatrix& kernel,
                                          const UniformGrid1D& xgrid, const PhaseGrid& pgrid,
                                          double hbar);

/// Inverse of wigner_transform. w.grid must equal wigner_phase_grid(xgrid, hbar).
DensityKernel inverse_wigner_transform(const WignerField& w, const UniformGrid1D& xgrid);

}  // namespace qsl
