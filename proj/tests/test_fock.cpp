#include "homotomo/errors.hpp"
#include "homotomo/fock.hpp"
#include "homotomo/quadrature.hpp"
#include "homotomo/special.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace homotomo;

namespace {

const QuadratureRule& line_rule() {
  static const QuadratureRule r = composite_gauss_legendre(-9.0, 9.0, 72, 10);
  return r;
}

double gaussian_pdf(double x, double mean) { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * (x - mean) * (x - mean)); }

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const QuadratureRule r = gauss_legendre(6, 0.0, 2.0);
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) s += r.weights(i) * std::pow(r.nodes(i), 11);
  EXPECT_NEAR(s, std::pow(2.0, 12) / 12.0, 1e-10);
}

TEST(Quadrature, GaussHermiteMoments) {
  // weight e^{-x^2}: int x^2 e^{-x^2} = sqrt(pi)/2
  const QuadratureRule r = gauss_hermite(20);
  EXPECT_NEAR(r.weights.sum(), std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR((r.weights.array() * r.nodes.array().square()).sum(), std::sqrt(std::numbers::pi) / 2, 1e-12);
}

TEST(Wavefunctions, Orthonormal) {
  const QuadratureRule& r = line_rule();
  const int nmax = 20;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const Eigen::VectorXd psi = quadrature_wavefunctions_at(nmax, r.nodes(i));
    G += r.weights(i) * psi * psi.transpose();
  }
  EXPECT_LT((G - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Wavefunctions, FrozenLowOrders) {
  // psi_0 = (2/pi)^{1/4} e^{-x^2}, psi_1 = 2 x psi_0
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    const double p0 = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
    EXPECT_NEAR(quadrature_wavefunction(0, x), p0, 1e-15);
    EXPECT_NEAR(quadrature_wavefunction(1, x), 2.0 * x * p0, 1e-15);
  }
}

TEST(Wavefunctions, StableFarInTheTail) {
  const Eigen::VectorXd psi = quadrature_wavefunctions_at(60, 12.0);
  EXPECT_TRUE(psi.allFinite());
  EXPECT_LT(psi.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Pdf, VacuumIsGaussian) {
  const Eigen::MatrixXcd rho = state_fock(0, 6).rho;
  for (double phi : {0.0, 1.1})
    for (double x : {-1.0, 0.0, 0.3, 1.7}) EXPECT_NEAR(quadrature_pdf(rho, phi, x), gaussian_pdf(x, 0.0), 1e-14);
}

TEST(Pdf, CoherentIsShiftedGaussian) {
  const cplx alpha(0.8, -0.3);
  const Eigen::MatrixXcd rho = state_coherent(alpha, 30).rho;
  for (double phi : {0.0, 0.7, 2.5}) {
    const double mean = std::real(alpha * std::polar(1.0, -phi));
    for (double x : {-1.0, 0.0, 0.5, 1.4}) EXPECT_NEAR(quadrature_pdf(rho, phi, x), gaussian_pdf(x, mean), 1e-10);
  }
}

TEST(Pdf, NormalizedAndMatchesOperatorMoments) {
  const Eigen::MatrixXcd rho = state_thermal(0.5, 30, StateTolerance{1e-12, 1e-9, -1e-10, 1e-5}).rho;
  const QuadratureRule& r = line_rule();
  for (double phi : {0.0, 0.9}) {
    double m0 = 0.0, m2 = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double p = quadrature_pdf(rho, phi, r.nodes(i));
      m0 += r.weights(i) * p;
      m2 += r.weights(i) * p * r.nodes(i) * r.nodes(i);
    }
    const Eigen::MatrixXcd X = quadrature_operator(30, phi);
    EXPECT_NEAR(m0, 1.0, 1e-12);
    EXPECT_NEAR(m2, expectation(rho, X * X).real(), 1e-10);
  }
}

TEST(Pdf, HarmonicsReproducePdf) {
  const Eigen::MatrixXcd rho = state_coherent({0.4, 0.2}, 12).rho;
  const double x = 0.3, phi = 1.2;
  const Eigen::VectorXcd c = pdf_harmonics(rho, x);
  double p = c(0).real();
  for (Eigen::Index d = 1; d < c.size(); ++d) p += 2.0 * std::real(c(d) * std::polar(1.0, d * phi));
  EXPECT_NEAR(p, quadrature_pdf(rho, phi, x), 1e-14);
}

TEST(Displacement, MatchesMatrixExponentialOnCentralBlock) {
  const cplx alpha(0.3, 0.2);
  const Eigen::MatrixXcd D = displacement(alpha, 10);
  const Eigen::MatrixXcd E = displacement_expm(alpha, 40);
  EXPECT_LT((D - E.topLeftCorner(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Displacement, VacuumColumnIsCoherentState) {
  const cplx alpha(0.5, -0.4);
  const Eigen::MatrixXcd D = displacement(alpha, 20);
  const Eigen::MatrixXcd rho = state_coherent(alpha, 20).rho;
  EXPECT_LT((D.col(0) * D.col(0).adjoint() - rho).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(std::abs(D(0, 0) - std::exp(-std::norm(alpha) / 2)), 0.0, 1e-15);
}

TEST(States, FockAndThermalFrozen) {
  EXPECT_EQ(state_fock(2, 4).rho(2, 2), cplx(1.0));
  const DensityMatrix th = state_thermal(1.0, 60);
  EXPECT_NEAR(th.rho(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(th.rho(1, 1).real(), 0.25, 1e-12);
}

TEST(States, TruncationDeficitIsRejected) {
  EXPECT_THROW(state_thermal(2.0, 5), NumericError);
  EXPECT_THROW(state_coherent(3.0, 6), NumericError);
  EXPECT_THROW(state_fock(4, 4), NumericError);
}

TEST(States, ValidateCatchesBrokenMatrices) {
  DensityMatrix s = state_fock(0, 3);
  s.rho(0, 1) = 0.1;
  EXPECT_THROW(validate(s), NumericError);
  s = state_fock(0, 3);
  s.rho(0, 0) = 0.9;
  EXPECT_THROW(validate(s), NumericError);
  s = state_fock(0, 3);
  s.rho(0, 0) = 1.5;
  s.rho(1, 1) = -0.5;
  EXPECT_THROW(validate(s), NumericError);
}

TEST(States, ExpectationDimensionMismatch) {
  EXPECT_THROW(expectation(state_fock(0, 3).rho, Eigen::MatrixXcd::Identity(4, 4)), std::invalid_argument);
}
