#include "homotomo/errors.hpp"
#include "homotomo/frames.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace homotomo;

namespace {

Eigen::MatrixXcd random_matrix(int dim, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cplx(nd(g), nd(g));
  return A;
}

Eigen::MatrixXcd projector(int n, int dim) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  P(n, n) = 1.0;
  return P;
}

double metric(const FrameCheckReport& r, const std::string& key) {
  for (const auto& [k, v] : r.metrics)
    if (k == key) return v;
  ADD_FAILURE() << "missing metric " << key;
  return std::nan("");
}

}  // namespace

TEST(Vectorize, RoundTripAndIndexOrder) {
  const Eigen::MatrixXcd A = random_matrix(4, 1);
  const Eigen::VectorXcd v = vectorize(A);
  EXPECT_EQ(v(1 * 4 + 3), A(1, 3));
  EXPECT_EQ((devectorize(v, 4) - A).norm(), 0.0);
}

TEST(Vectorize, SecondFactorActsAsTranspose) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXcd A = random_matrix(3, seed), B = random_matrix(3, seed + 100);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_LT((kron(I, B) * vectorize(A) - vectorize(A * B.transpose())).norm(), 1e-12);
    EXPECT_LT((kron(B, I) * vectorize(A) - vectorize(B * A)).norm(), 1e-12);
  }
}

TEST(Vectorize, SwapExchangesFactors) {
  const TwoModeOperator E = swap_operator(3);
  const Eigen::MatrixXcd A = random_matrix(3, 7), B = random_matrix(3, 8);
  EXPECT_LT((E * kron(A, B) * E - kron(B, A)).norm(), 1e-12);
  EXPECT_LT((E * E - TwoModeOperator::Identity(9, 9)).norm(), 0.0 + 1e-15);
}

TEST(MomentsFrame, DualMomentsFrozen) {
  const Eigen::MatrixXcd g00 = dual_moment(0, 0, 4);
  EXPECT_LT((g00 - projector(0, 4)).norm(), 1e-15);
  const Eigen::MatrixXcd g11 = dual_moment(1, 1, 4);
  EXPECT_LT((g11 - (projector(1, 4) - projector(0, 4))).norm(), 1e-15);
  // g_{0,1} = |0><1|
  const Eigen::MatrixXcd g01 = dual_moment(0, 1, 4);
  EXPECT_NEAR(std::abs(g01(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(g01.norm(), 1.0, 1e-15);
}

TEST(MomentsFrame, Biorthogonality) { EXPECT_LE(moments_biorthogonality_error(6), 1e-12); }

TEST(MomentsFrame, DyadSumMatchesClosedForm) {
  const TwoModeOperator F = moments_frame_operator(6), C = moments_frame_closed(6);
  EXPECT_LT((F - C).cwiseAbs().maxCoeff() / C.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((F - F.adjoint()).norm(), 1e-9 * F.norm());
}

TEST(MomentsFrame, VacuumEntryIsOne) {
  // <00|F|00> = 1: only a^dag^0 a^0 = I has a vacuum-vacuum element.
  EXPECT_NEAR(std::abs(moments_frame_operator(5)(0, 0)), 1.0, 1e-14);
}

TEST(MomentsFrame, CheckPasses) {
  const FrameCheckReport r = moments_frame_check(10);
  EXPECT_TRUE(r.passed) << r.note;
}

TEST(MomentsFrame, RejectsLargeDimension) { EXPECT_THROW(moments_frame_operator(13), std::invalid_argument); }

TEST(QuadratureFrame, MatchesSpectralPath) {
  const FrameCheckReport r = quadrature_frame_check(6);
  EXPECT_TRUE(r.passed) << r.note;
}

TEST(QuadratureFrame, IsHermitianAndPositive) {
  const TwoModeOperator F = frame_operator_quadrature(4);
  EXPECT_LT((F - F.adjoint()).norm(), 1e-12 * F.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (F + F.adjoint()));
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(SpectralFunction, VacuumEntryOfConstant) {
  // <<00|D(z)>> = e^{-|z|^2/2}, so the entry is int d^2z/pi e^{-|z|^2} = 1.
  const TwoModeOperator F = spectral_function(4, [](double) { return 1.0; });
  EXPECT_NEAR(F(0, 0).real(), 1.0, 1e-10);
}

TEST(WindowFrame, GaussianAgreesWithSpectralPath) {
  FrameKernelSpec spec;
  spec.sigma = 1.0;
  const FrameCheckReport r = generate_frame(spec, 6);
  EXPECT_TRUE(r.passed) << r.note;
  EXPECT_LT(metric(r, "dual_window_inverse_gap"), 1e-10);
}

TEST(WindowFrame, DeltaWindowIsQuadratureFrame) {
  FrameKernelSpec spec;
  spec.family = FrameKernelSpec::Family::Delta;
  EXPECT_TRUE(generate_frame(spec, 6).passed);
}

TEST(WindowFrame, DualTransformInvertsTransform) {
  FrameKernelSpec spec;
  spec.sigma = 0.7;
  for (double k : {0.1, 0.5, 1.0, 2.0, 4.0})
    EXPECT_NEAR(std::abs(spec.dual_transform(k) * std::conj(spec.transform(k)) - cplx(std::numbers::pi * k / 2)), 0.0,
                1e-12 * k);
}

TEST(WindowFrame, BoxWindowIsRejected) {
  FrameKernelSpec spec;
  spec.family = FrameKernelSpec::Family::Tabulated;
  for (int i = 0; i <= 20; ++i) {
    spec.grid.push_back(-1.0 + 0.1 * i);
    spec.values.push_back(1.0);
  }
  EXPECT_THROW(generate_frame(spec, 6), ConfigError);
}

TEST(WindowFrame, NonpositiveSigmaIsRejected) {
  FrameKernelSpec spec;
  spec.sigma = 0.0;
  EXPECT_THROW(generate_frame(spec, 4), ConfigError);
}

TEST(OtherFrames, FamilyBAndRescaledAConverge) {
  const TwoModeOperator inv = spectral_function(6, [](double t) { return 1.0 / (std::numbers::pi * t); });
  const TwoModeOperator gz = spectral_function(6, [](double t) { return std::exp(-t * t) / t; });
  EXPECT_LT(compare_central(other_frame_operator(OtherFamily::B, 6, 80), inv, 6).rel_error, 1e-10);
  EXPECT_LT(compare_central(other_frame_operator(OtherFamily::ARescaled, 6, 160), gz, 6).rel_error, 1e-10);
}

TEST(OtherFrames, PrintedFamilyAPartialSumsGrow) {
  const TwoModeOperator gz = spectral_function(6, [](double t) { return std::exp(-t * t) / t; });
  double prev = 0.0;
  for (int nmax : {8, 16, 32}) {
    const double rel = compare_central(other_frame_operator(OtherFamily::A, 6, nmax), gz, 6).rel_error;
    EXPECT_GT(rel, prev);
    prev = rel;
  }
  EXPECT_GT(prev, 1.0);
  EXPECT_FALSE(other_frames_check(6).passed);
}

TEST(Swap, FromQuadraturesMatchesExactSwap) {
  const TwoModeOperator E = swap_from_quadratures(4);
  EXPECT_LT((E - swap_operator(4)).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(Swap, ExpansionCheckPasses) {
  const FrameCheckReport r = swap_expansion_check(4);
  EXPECT_TRUE(r.passed) << r.note;
}

TEST(Swap, KolmogorovGramIsPositiveSemidefinite) {
  std::vector<double> pts;
  for (int i = 0; i < 25; ++i) pts.push_back(-4.0 + 8.0 * i / 24.0);
  const Eigen::MatrixXd G = kolmogorov_kernel_gram(pts);
  EXPECT_LT((G - G.transpose()).norm(), 1e-12 * G.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10 * es.eigenvalues().maxCoeff());
  EXPECT_THROW(kolmogorov_kernel_gram(pts, 0.0), std::invalid_argument);
}

TEST(Alternate, KernelMatrixVacuumEntry) {
  EXPECT_NEAR(kolmogorov_kernel_matrix(20)(0, 0).real(), std::sqrt(std::numbers::pi / 2), 1e-12);
}

TEST(Alternate, IdentityAndRampReproduceOperator) {
  const Eigen::MatrixXcd Z = random_matrix(4, 17);
  const int aux = 60;
  const AlternateExpansionReport id = alternate_expansion(Eigen::MatrixXcd::Identity(aux, aux), Z);
  EXPECT_LT(id.error, 1e-6);
  EXPECT_LT(id.canonical_gap, 1e-12);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(aux, aux);
  for (int i = 0; i + 1 < aux; ++i) L(i, i + 1) = 0.3;
  EXPECT_LT(alternate_expansion(L, Z).error, 1e-6);
}

TEST(Alternate, NearSingularLIsRejected) {
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(40, 40);
  L(3, 3) = 1e-12;
  EXPECT_THROW(alternate_expansion(L, random_matrix(3, 2)), NumericError);
}

TEST(DoubleCommutator, FrozenValues) {
  const Eigen::MatrixXcd a = ladder<double>(5).cast<cplx>();
  EXPECT_LT(double_commutator(a).norm(), 1e-15);
  const Eigen::MatrixXcd expect = projector(0, 5) - projector(1, 5);
  EXPECT_LT((double_commutator(projector(0, 5)) - expect).norm(), 1e-15);
}

TEST(DoubleCommutator, CheckPasses) { EXPECT_TRUE(double_commutator_check(8).passed); }

TEST(CanonicalDual, ReconstructsSmallStates) {
  const FrameCheckReport r = canonical_dual_check(4);
  EXPECT_TRUE(r.passed) << r.note;
}
