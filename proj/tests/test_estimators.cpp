#include "homotomo/errors.hpp"
#include "homotomo/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace homotomo;

namespace {

cplx exact(const Eigen::MatrixXcd& rho, const EstimatorKernel& k) { return expectation(rho, k.target_operator(rho.rows())); }

Eigen::MatrixXcd coherent(cplx alpha, int dim = 14) { return state_coherent(alpha, dim).rho; }

}  // namespace

TEST(Kernels, MomentFrozenValues) {
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9})
    for (double phi : {0.0, 0.5, 2.0}) {
      EXPECT_EQ(eval_moment(0, 0, x, phi), cplx(1.0));
      EXPECT_NEAR(std::abs(eval_moment(1, 0, x, phi) - 2.0 * x * std::polar(1.0, -phi)), 0.0, 1e-15);
      // a^dag^2 a^2: C(4,2)^{-1} 2^{-2} H_4(sqrt2 x) = (16 x^4 - 24 x^2 + 3) / 6
      const double h4 = (16.0 * x * x * x * x - 24.0 * x * x + 3.0) / 6.0;
      EXPECT_NEAR(std::abs(eval_moment(2, 2, x, phi) - h4), 0.0, 1e-12);
    }
}

TEST(Kernels, DisplacementRepresentationsAgree) {
  for (cplx alpha : {cplx(0.3, 0.0), cplx(0.2, -0.5), cplx(0.0, 0.4)})
    for (double x : {-1.5, -0.2, 0.0, 0.8, 2.0})
      for (double phi : {0.0, 0.9, 2.7}) {
        const cplx v = eval_displacement(alpha, x, phi);
        EXPECT_NEAR(std::abs(v - eval_displacement_series(alpha, x, phi)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(v - eval_displacement_theta(alpha, x, phi)), 0.0, 1e-12);
      }
  EXPECT_EQ(eval_displacement(0.3, 0.0, 1.0), cplx(1.0));
}

TEST(Kernels, VacuumPatternFunctionAtOrigin) {
  EXPECT_NEAR(std::abs(eval_dyad(0, 0, 1.0, 0.0, 0.3) - 2.0), 0.0, 1e-3);
  EXPECT_NEAR(std::abs(KernelEvaluator(EstimatorKernel::moment_dual(0, 0, 200))(0.0, 0.0) - 2.0), 0.0, 1e-12);
}

TEST(Kernels, DescriptorRoundTrip) {
  for (const std::string d : {"moment:1,1", "disp:0.3,-0.2", "dyad:0,1", "dual:0,2,12", "a", "num"})
    EXPECT_EQ(EstimatorKernel::parse(d).describe(), d);
}

TEST(Kernels, BadDescriptorsAreRejected) {
  for (const std::string d : {"moment:1", "moment:1,x", "dyad:-1,0", "foo", "a:1", "moment:1.5,0", "disp:0,0,0"})
    EXPECT_THROW(EstimatorKernel::parse(d), ConfigError) << d;
  EXPECT_THROW(EstimatorKernel::parse("num", 0.0), std::exception);
}

TEST(Kernels, TargetOperators) {
  const Eigen::MatrixXcd n = EstimatorKernel::simple_num().target_operator(5);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(std::abs(n(i, i) - cplx(i)), 0.0, 1e-14);
  const Eigen::MatrixXcd P = EstimatorKernel::dyad(1, 2).target_operator(5);
  EXPECT_EQ(P(1, 3), cplx(1.0));
  EXPECT_EQ(P.cwiseAbs().sum(), 1.0);
}

TEST(Unbiasedness, MomentsAndDisplacementByIntegration) {
  const Eigen::MatrixXcd rho = coherent({0.6, 0.3});
  for (const auto& k : {EstimatorKernel::simple_a(), EstimatorKernel::simple_num(), EstimatorKernel::moment(2, 1),
                        EstimatorKernel::moment(0, 3), EstimatorKernel::displacement({0.3, 0.2})})
    EXPECT_NEAR(std::abs(integrate_kernel(rho, KernelEvaluator(k), 1.0) - exact(rho, k)), 0.0, 1e-10) << k.describe();
}

TEST(Unbiasedness, DyadsByIntegration) {
  const Eigen::MatrixXcd rho = state_thermal(0.3, 14, StateTolerance{1e-12, 1e-9, -1e-10, 1e-6}).rho;
  for (const auto& k : {EstimatorKernel::dyad(0, 0), EstimatorKernel::dyad(1, 0), EstimatorKernel::dyad(0, 2)})
    EXPECT_NEAR(std::abs(integrate_kernel(rho, KernelEvaluator(k), 1.0) - exact(rho, k)), 0.0, 1e-3) << k.describe();
}

TEST(Unbiasedness, MomentDualByIntegration) {
  const Eigen::MatrixXcd rho = coherent({0.3, 0.0}, 10);
  const EstimatorKernel k = EstimatorKernel::moment_dual(0, 1, 30);
  EXPECT_NEAR(std::abs(integrate_kernel(rho, KernelEvaluator(k), 1.0) - exact(rho, k)), 0.0, 1e-8);
}

TEST(Efficiency, SmearedDataAreUnbiased) {
  const Eigen::MatrixXcd rho = coherent({0.5, -0.2});
  for (double eta : {0.9, 0.7}) {
    for (const auto& k : {unbias_eta(EstimatorKernel::simple_num(), eta), unbias_eta(EstimatorKernel::moment(1, 2), eta),
                          EstimatorKernel::dyad(0, 0, eta), EstimatorKernel::dyad(0, 1, eta)})
      EXPECT_NEAR(std::abs(integrate_kernel(rho, KernelEvaluator(k), eta) - exact(rho, k)), 0.0, 1e-8)
          << k.describe() << " eta " << eta;
  }
}

TEST(Efficiency, UncorrectedKernelIsBiased) {
  // negative control: the eta = 1 number kernel on eta = 0.7 data picks up the noise variance
  const Eigen::MatrixXcd rho = coherent({0.5, -0.2});
  const cplx v = integrate_kernel(rho, KernelEvaluator(EstimatorKernel::simple_num()), 0.7);
  EXPECT_GT(std::abs(v - exact(rho, EstimatorKernel::simple_num())), 0.1);
}

TEST(Efficiency, BelowHalfIsRefused) {
  EXPECT_THROW(KernelEvaluator(EstimatorKernel::dyad(0, 0, 0.4)), InsufficientEfficiency);
  EXPECT_THROW(unbias_eta(EstimatorKernel::simple_num(), 0.5), InsufficientEfficiency);
  EXPECT_THROW(unbias_gaussian(EstimatorKernel::simple_num(), 0.6), InsufficientEfficiency);
  EXPECT_NO_THROW(unbias_gaussian(EstimatorKernel::simple_num(), 0.2));
  EXPECT_DOUBLE_EQ(eta_to_nbar(0.5), 0.5);
}

TEST(Efficiency, GaussianCoefficientRescaling) {
  const cplx c = unbias_gaussian_coefficient(1.0, {0.3, 0.4}, 0.2);
  EXPECT_NEAR(c.real(), std::exp(0.2 * 0.25), 1e-15);
}

TEST(Estimate, PairwiseSum) {
  std::vector<double> v(1'000'001, 0.1);
  EXPECT_NEAR(pairwise_sum(v.data(), v.size()), 100000.1, 1e-8);
  EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}

TEST(Estimate, ThreadIndependent) {
  SampleSpec s;
  s.rho = coherent({0.8, 0.0});
  s.count = 50'000;
  s.seed = 3;
  const auto r = sample(s);
  const EstimateReport a = estimate(r, EstimatorKernel::simple_num(), 1), b = estimate(r, EstimatorKernel::simple_num(), 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.stderr_re, b.stderr_re);
  EXPECT_EQ(a.n, 50'000u);
}

TEST(Estimate, MonteCarloWithinErrorBars) {
  SampleSpec s;
  s.rho = coherent({0.8, 0.0});
  s.count = 200'000;
  s.seed = 21;
  const auto r = sample(s);
  for (const auto& k : {EstimatorKernel::simple_a(), EstimatorKernel::simple_num(), EstimatorKernel::dyad(0, 0),
                        EstimatorKernel::displacement(0.3)}) {
    const EstimateReport e = estimate(r, k);
    const cplx t = exact(s.rho, k);
    EXPECT_LE(std::abs(e.value.real() - t.real()), 4.0 * e.stderr_re + e.extrapolation_error) << k.describe();
    EXPECT_LE(std::abs(e.value.imag() - t.imag()), 4.0 * e.stderr_im + e.extrapolation_error + 1e-12) << k.describe();
  }
}

TEST(Estimate, StderrShrinksAsRootN) {
  SampleSpec s;
  s.rho = coherent({0.8, 0.0});
  s.count = 160'000;
  s.seed = 4;
  const auto r = sample(s);
  const std::vector<QuadratureRecord> quarter(r.begin(), r.begin() + 40'000);
  const double ratio = estimate(quarter, EstimatorKernel::simple_num()).stderr_re /
                       estimate(r, EstimatorKernel::simple_num()).stderr_re;
  EXPECT_NEAR(ratio, 2.0, 0.1);
}

TEST(Estimate, EmptyInputIsRejected) { EXPECT_THROW(estimate({}, EstimatorKernel::simple_num()), std::exception); }

TEST(PauliDemo, RecoversBlochVector) {
  const Eigen::Vector3d bloch(0.3, -0.5, 0.6);
  const PauliDemoReport r = pauli_demo(0.4, bloch, 100'000, 9);
  for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(r.estimate(i) - bloch(i)), 4.0 * r.stderr_(i));
}
