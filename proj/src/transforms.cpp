#include "qsl/transforms.hpp"

#include <cmath>
#include <complex>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include <fftw3.h>

#include "qsl/errors.hpp"

namespace qsl {

using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

// Plans are created once per length and shared; fftw_execute_dft is
// thread-safe, plan creation is not.
class FftPlans {
 public:
  static const FftPlans& get(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot.reset(new FftPlans(n));
    return *slot;
  }

  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(cplx* in, cplx* out) const {
    fftw_execute_dft(forward_, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }
  void backward(cplx* in, cplx* out) const {
    fftw_execute_dft(backward_, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  explicit FftPlans(int n) {
    std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, flags);
  }

  fftw_plan forward_;
  fftw_plan backward_;
};

std::size_t wrap(long k, long n) { return static_cast<std::size_t>(((k % n) + n) % n); }

void require_even(const UniformGrid1D& xgrid) {
  if (xgrid.size() % 2 != 0) throw ShapeError("Wigner transform needs an even number of x nodes");
}

// Index on the half-step lattice of every row of pgrid.x.
std::vector<long> lattice_rows(const UniformGrid1D& xgrid, const UniformGrid1D& rows) {
  const double half = 0.5 * xgrid.spacing();
  const long last = 2 * static_cast<long>(xgrid.size()) - 2;
  std::vector<long> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double pos = (rows[r] - xgrid.min()) / half;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) > 1e-8 || nearest < 0 || nearest > static_cast<double>(last)) {
      std::ostringstream os;
      os << "phase grid row x=" << rows[r] << " is not on the kernel's half-step lattice";
      throw ShapeError(os.str());
    }
    out[r] = static_cast<long>(nearest);
  }
  return out;
}

void require_reciprocal(const UniformGrid1D& xgrid, const UniformGrid1D& paxis, double hbar) {
  const PhaseGrid expected = wigner_phase_grid(xgrid, hbar);
  if (!paxis.matches(expected.p(), 1e-9)) {
    std::ostringstream os;
    os << "momentum axis [" << paxis.min() << ", " << paxis.max() << "] x " << paxis.size()
       << " is not the reciprocal grid [" << expected.p().min() << ", " << expected.p().max()
       << "] x " << expected.p().size();
    throw ShapeError(os.str());
  }
}

}  // namespace

PhaseGrid wigner_phase_grid(const UniformGrid1D& xgrid, double hbar) {
  require_even(xgrid);
  if (!(hbar > 0.0)) throw ArgumentError("hbar must be positive");
  const std::size_t n = xgrid.size();
  const double dp = pi * hbar / (static_cast<double>(n) * xgrid.spacing());
  const double half_n = static_cast<double>(n / 2);
  return PhaseGrid(UniformGrid1D(xgrid.min(), xgrid.max(), 2 * n - 1),
                   UniformGrid1D(-half_n * dp, (half_n - 1.0) * dp, n));
}

Eigen::MatrixXcd wigner_transform_complex(const ComplexMatrix& kernel,
                                          const UniformGrid1D& xgrid, const PhaseGrid& pgrid,
                                          double hbar) {
  require_even(xgrid);
  const long n = static_cast<long>(xgrid.size());
  if (kernel.rows() != n || kernel.cols() != n) throw ShapeError("kernel does not match its grid");
  require_reciprocal(xgrid, pgrid.p(), hbar);
  const std::vector<long> rows = lattice_rows(xgrid, pgrid.x());

  const FftPlans& fft = FftPlans::get(static_cast<int>(n));
  const double scale = xgrid.spacing() / (pi * hbar);
  std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  Eigen::MatrixXcd w(static_cast<Eigen::Index>(rows.size()), n);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const long j = rows[r];
    const long s = j % 2;
    std::fill(in.begin(), in.end(), cplx{});
    for (long m = -n / 2; m < n / 2; ++m) {
      const long d = 2 * m + s;
      const long a = (j + d) / 2;
      const long b = (j - d) / 2;
      if (a < 0 || a >= n || b < 0 || b >= n) continue;
      in[wrap(m, n)] = kernel(a, b);
    }
    fft.forward(in.data(), out.data());
    for (long k = -n / 2; k < n / 2; ++k) {
      const cplx twiddle = s ? std::polar(1.0, -pi * static_cast<double>(k) / static_cast<double>(n))
                             : cplx{1.0, 0.0};
      w(static_cast<Eigen::Index>(r), k + n / 2) = scale * twiddle * out[wrap(k, n)];
    }
  }
  return w;
}

WignerField wigner_transform(const DensityKernel& rho, const PhaseGrid& pgrid, double hbar) {
  const Eigen::MatrixXcd w = wigner_transform_complex(rho.values, rho.grid, pgrid, hbar);
  const double residue = w.imag().cwiseAbs().maxCoeff();
  if (residue > 1e-10) {
    std::ostringstream os;
    os << "Wigner transform left an imaginary residue of " << residue;
    throw NumericalError(os.str());
  }
  return WignerField{pgrid, w.real(), rho.time, hbar};
}

WignerField wigner_transform(const DensityKernel& rho, double hbar) {
  return wigner_transform(rho, wigner_phase_grid(rho.grid, hbar), hbar);
}

DensityKernel inverse_wigner_transform(const WignerField& w, const UniformGrid1D& xgrid) {
  const PhaseGrid expected = wigner_phase_grid(xgrid, w.hbar);
  if (!w.grid.matches(expected, 1e-9)) {
    throw ShapeError("inverse Wigner transform needs the full half-step lattice of the target grid");
  }
  const long n = static_cast<long>(xgrid.size());
  const FftPlans& fft = FftPlans::get(static_cast<int>(n));
  const double scale = pi * w.hbar / xgrid.spacing() / static_cast<double>(n);
  std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);

  for (long j = 0; j <= 2 * n - 2; ++j) {
    const long s = j % 2;
    for (long k = -n / 2; k < n / 2; ++k) {
      const cplx twiddle = s ? std::polar(1.0, pi * static_cast<double>(k) / static_cast<double>(n))
                             : cplx{1.0, 0.0};
      in[wrap(k, n)] = scale * twiddle * w.values(j, k + n / 2);
    }
    fft.backward(in.data(), out.data());
    for (long m = -n / 2; m < n / 2; ++m) {
      const long d = 2 * m + s;
      const long a = (j + d) / 2;
      const long b = (j - d) / 2;
      if (a < 0 || a >= n || b < 0 || b >= n) continue;
      rho(a, b) = out[wrap(m, n)];
    }
  }
  return DensityKernel{xgrid, std::move(rho), w.time};
}

}  // namespace qsl
