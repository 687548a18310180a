#include <doctest.h>

#include "oracles/oracles.hpp"
#include "qsl/errors.hpp"
#include "qsl/metrics.hpp"
#include "qsl/transforms.hpp"

using namespace qsl;

namespace {
const OscillatorParams kOsc{1.0, 1.0, 1.0, 2.0};
const PNorm kP[] = {PNorm::finite(1.0), PNorm::finite(2.0), PNorm::finite(3.5), PNorm::infinity()};
double pval(const PNorm& p) { return p.is_infinite() ? HUGE_VAL : p.value(); }
}  // namespace

TEST_CASE("p parsing and labels") {
  CHECK(PNorm::parse("inf").is_infinite());
  CHECK(PNorm::parse("2").value() == 2.0);
  CHECK(PNorm::parse("2").label() == "2");
  CHECK(PNorm::parse("inf").label() == "inf");
  CHECK(PNorm::parse("2.5").label() == "2.5");
  CHECK_THROWS_AS(PNorm::finite(0.5), ArgumentError);
  CHECK_THROWS_AS(PNorm::parse("abc"), ArgumentError);
  CHECK_THROWS_AS(PNorm::parse("0"), ArgumentError);
}

TEST_CASE("power sums") {
  const double v[] = {3.0, 4.0};
  CHECK(p_sum(v, PNorm::finite(1.0)) == 7.0);
  CHECK(p_sum(v, PNorm::finite(2.0)) == doctest::Approx(5.0));
  CHECK(p_sum(v, PNorm::infinity()) == 4.0);
  const double tiny[] = {1e-200, 1e-200};
  CHECK(p_sum(tiny, PNorm::finite(2.0)) == doctest::Approx(std::sqrt(2.0) * 1e-200));
}

TEST_CASE("SVD Schatten norms agree with the square-root Gram oracle") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const ComplexMatrix a = oracle::random_matrix(48, seed);
    for (const auto& p : kP) {
      const double ref = oracle::schatten_from_eigen(a, 0.1, pval(p));
      CHECK(std::abs(schatten_norm(a, 0.1, p) - ref) <= 1e-9 * std::max(1.0, ref));
    }
  }
  const UniformGrid1D g(-10.0, 10.0, 64);
  const FrequencyProtocol pr{1.0, 2.0, 1.0};
  const AuxTrajectory traj = solve_aux_ode(pr, 1e-3);
  const ComplexMatrix diff =
      parametric_kernel(kOsc, traj, 0.8, g).values - parametric_kernel(kOsc, traj, 0.0, g).values;
  for (const auto& p : kP) {
    CHECK(std::abs(schatten_norm(diff, g.spacing(), p) - oracle::schatten_from_eigen(diff, g.spacing(), pval(p))) <
          1e-9);
  }
}

TEST_CASE("degenerate spectra are resolved") {
  const UniformGrid1D g(-10.0, 10.0, 64);
  const FrequencyProtocol pr{1.0, 2.0, 1.0};
  const AuxTrajectory traj = solve_aux_ode(pr, 1e-3);
  // pure-state rates have a +-lambda pair with equal singular values
  const double dt = 0.01;
  const ComplexMatrix rate = (parametric_kernel(kOsc, traj, 0.18, g).values -
                              parametric_kernel(kOsc, traj, 0.16, g).values) /
                             (2 * dt);
  const Eigen::VectorXd sv = operator_singular_values(rate, g.spacing());
  CHECK(sv.allFinite());
  CHECK(sv(0) == doctest::Approx(sv(1)).epsilon(1e-10));
  CHECK(sv(2) < 1e-10 * sv(0));
  CHECK(schatten_norm(rate, g.spacing(), PNorm::finite(1.0)) ==
        doctest::Approx(oracle::schatten_from_eigen(rate, g.spacing(), 1.0)).epsilon(1e-10));
}

TEST_CASE("Schatten norms of orthogonal pure states") {
  const UniformGrid1D g(-10.0, 10.0, 128);
  const DensityKernel r0 = ground_state_kernel(kOsc, g);
  const DensityKernel r1{g, oracle::excited_kernel(g), 0.0};
  CHECK(schatten_distance(r0, r1, PNorm::finite(1.0)) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(schatten_distance(r0, r1, PNorm::finite(2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(schatten_distance(r0, r1, PNorm::infinity()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pure_fidelity(r0, r1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(bures_angle(0.0) == doctest::Approx(oracle::pi / 2));
  CHECK_THROWS_AS(schatten_distance(r0, ground_state_kernel(kOsc, UniformGrid1D(-10.0, 10.0, 64)),
                                    PNorm::finite(1.0)),
                  ShapeError);
}

TEST_CASE("fidelity and trace distance match the Gaussian overlap") {
  const UniformGrid1D g(-10.0, 10.0, 256);
  for (double tau : {0.1, 1.0, 10.0}) {
    CAPTURE(tau);
    const FrequencyProtocol pr{1.0, 2.0, tau};
    const AuxTrajectory traj = solve_aux_ode(pr, tau / 4000.0);
    const oracle::AiryAux exact(pr);
    const DensityKernel r0 = parametric_kernel(kOsc, traj, 0.0, g);
    for (double frac : {0.3, 1.0}) {
      const double t = frac * tau;
      const DensityKernel rt = parametric_kernel(kOsc, traj, t, g);
      const double f = oracle::gaussian_overlap(0.5, parametric_width(kOsc, exact.at(t)));
      CHECK(pure_fidelity(r0, rt) == doctest::Approx(f).epsilon(1e-8));
      CHECK(schatten_distance(r0, rt, PNorm::finite(1.0)) ==
            doctest::Approx(2.0 * std::sqrt(1.0 - f)).epsilon(1e-7));
    }
  }
}

TEST_CASE("Bures quantities and the continuity bounds") {
  CHECK(bures_angle(1.0) == 0.0);
  CHECK(bures_angle(1.0 + 5e-7) == 0.0);
  CHECK_THROWS_AS(bures_angle(1.1), ArgumentError);
  CHECK_THROWS_AS(bures_angle(-0.1), ArgumentError);
  CHECK(bures_distance(0.25) == doctest::Approx(1.0));
  // pure states: l1 = 2 sqrt(1 - F) sits on the upper bound
  for (double f : {0.0, 0.3, 0.9, 1.0}) CHECK(continuity_check(f, 2.0 * std::sqrt(1.0 - f)));
  CHECK_FALSE(continuity_check(0.5, 2.0));
  CHECK_FALSE(continuity_check(0.5, 0.01));
}

TEST_CASE("Wasserstein norms") {
  const PhaseGrid g(UniformGrid1D(-1.0, 1.0, 3), UniformGrid1D(-1.0, 1.0, 3));
  RealField f = RealField::Zero(3, 3);
  f(1, 1) = 2.0;
  f(0, 2) = -1.0;
  CHECK(wasserstein_norm(f, g, PNorm::finite(1.0)) == doctest::Approx(3.0));
  CHECK(wasserstein_norm(f, g, PNorm::finite(2.0)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(wasserstein_norm(f, g, PNorm::infinity()) == doctest::Approx(2.0));
  const WignerField a{g, f, 0.0, 1.0};
  const WignerField b{g, RealField::Zero(3, 3), 0.0, 1.0};
  CHECK(wasserstein_distance(a, b, PNorm::finite(1.0)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(wasserstein_norm(RealField::Zero(2, 3), g, PNorm::finite(1.0)), ShapeError);
}

TEST_CASE("pure fidelity rejects mixed references") {
  const UniformGrid1D g(-10.0, 10.0, 64);
  const DensityKernel r0 = ground_state_kernel(kOsc, g);
  const DensityKernel mixed{g, 0.5 * (r0.values + oracle::excited_kernel(g)), 0.0};
  CHECK_THROWS_AS(pure_fidelity(mixed, r0), ArgumentError);
}
