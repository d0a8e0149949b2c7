#include "homotomo/errors.hpp"
#include "homotomo/spintomo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace homotomo;

namespace {

double opnorm(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd B(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) B(i, j) = cplx(nd(g), nd(g));
  Eigen::MatrixXcd rho = B * B.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(SpinKernel, FrozenHalfAndOne) {
  Eigen::MatrixXd half(2, 2);
  half << 1.0, -0.5, -0.5, 1.0;
  EXPECT_EQ((spin_kernel(1).K - half).norm(), 0.0);

  Eigen::MatrixXd one(3, 3);
  one << 1.5, -0.75, 0.0, -0.75, 1.5, -0.75, 0.0, -0.75, 1.5;
  EXPECT_EQ((spin_kernel(2).K - one).norm(), 0.0);
}

TEST(SpinKernel, RangeIsChecked) {
  EXPECT_THROW(spin_kernel(0), ConfigError);
  EXPECT_THROW(spin_kernel(17), ConfigError);
}

TEST(SpinOperators, AngularMomentumAlgebra) {
  for (int two_j = 1; two_j <= 6; ++two_j) {
    const SpinOperators s = spin_operators(two_j);
    const double J = 0.5 * two_j;
    const int d = two_j + 1;
    EXPECT_LT((s.x * s.y - s.y * s.x - cplx(0, 1) * s.z).norm(), 1e-12);
    const Eigen::MatrixXcd casimir = s.x * s.x + s.y * s.y + s.z * s.z;
    EXPECT_LT((casimir - J * (J + 1) * Eigen::MatrixXcd::Identity(d, d)).norm(), 1e-12);
    EXPECT_NEAR(s.z(d - 1, d - 1).real(), J, 1e-15);
  }
}

TEST(SpinOperators, DirectionalComponent) {
  const SpinOperators s = spin_operators(2);
  EXPECT_LT((spin_along(s, 0.0, 1.3) - s.z).norm(), 1e-14);
  EXPECT_LT((spin_along(s, std::numbers::pi / 2, 0.0) - s.x).norm(), 1e-14);
  EXPECT_LT((spin_along(s, std::numbers::pi / 2, std::numbers::pi / 2) - s.y).norm(), 1e-14);
}

TEST(SpinSwap, ReconstructsSwapForSeveralSpins) {
  for (int two_j = 1; two_j <= 4; ++two_j) {
    const SwapReconstruction r = swap_from_quorum(two_j);
    EXPECT_LT(r.error, 1e-10) << "2J = " << two_j;
    EXPECT_LT(r.involution_error, 1e-10);
    EXPECT_LT((r.E - swap_operator(two_j + 1)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SpinSwap, HalvedPrefactorGivesHalfTheSwap) {
  // (2J+1)/(2 pi) in front of the quorum integral reconstructs E/2, not E.
  for (int two_j = 1; two_j <= 4; ++two_j) {
    const TwoModeOperator I = quorum_swap_integral(two_j, 16);
    const TwoModeOperator E = swap_operator(two_j + 1);
    EXPECT_LT(opnorm((two_j + 1) / (2 * std::numbers::pi) * I - 0.5 * E), 1e-12);
  }
}

TEST(SpinSwap, LowOrderQuadratureIsNotExact) {
  const TwoModeOperator I = quorum_swap_integral(4, 1);
  EXPECT_GT(opnorm(5.0 / std::numbers::pi * I - swap_operator(5)), 1e-3);
}

TEST(SpinSwap, MaxOrderExhaustionThrows) { EXPECT_THROW(swap_from_quorum(6, 1, 1e-30, 2), NumericError); }

TEST(SpinEstimate, HighestWeightProjectorIsUnbiased) {
  for (int two_j : {1, 2, 3}) {
    const int d = two_j + 1;
    Eigen::MatrixXcd top = Eigen::MatrixXcd::Zero(d, d);
    top(d - 1, d - 1) = 1.0;
    const EstimateReport e = spin_estimate_demo(two_j, top, top, 50'000, 3);
    EXPECT_LE(std::abs(e.value.real() - 1.0), 4.0 * e.stderr_re) << "2J = " << two_j;
  }
}

TEST(SpinEstimate, RandomStateAndObservable) {
  const Eigen::MatrixXcd rho = random_state(3, 5), R = random_state(3, 6);
  const Eigen::MatrixXcd A = R + R.adjoint();
  const EstimateReport e = spin_estimate_demo(2, rho, A, 50'000, 11);
  EXPECT_LE(std::abs(e.value.real() - (rho * A).trace().real()), 4.0 * e.stderr_re);
}

TEST(SpinEstimate, DeterministicForSeed) {
  const Eigen::MatrixXcd rho = random_state(2, 1);
  const EstimateReport a = spin_estimate_demo(1, rho, rho, 1000, 42), b = spin_estimate_demo(1, rho, rho, 1000, 42);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.stderr_re, b.stderr_re);
}

TEST(SpinEstimate, IdentityHasUnitMean) {
  const Eigen::MatrixXcd rho = random_state(2, 9);
  const EstimateReport e = spin_estimate_demo(1, rho, Eigen::MatrixXcd::Identity(2, 2), 20'000, 4);
  EXPECT_LE(std::abs(e.value.real() - 1.0), 4.0 * e.stderr_re + 1e-12);
}

TEST(SpinEstimate, InputsAreValidated) {
  const Eigen::MatrixXcd rho = random_state(2, 1);
  EXPECT_THROW(spin_estimate_demo(2, rho, rho, 100, 1), ConfigError);
  EXPECT_THROW(spin_estimate_demo(1, 2.0 * rho, rho, 100, 1), ConfigError);
  EXPECT_THROW(spin_estimate_demo(1, rho, rho, 1, 1), ConfigError);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(spin_estimate_demo(1, bad, rho, 100, 1), ConfigError);
}
