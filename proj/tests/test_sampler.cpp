#include "homotomo/fock.hpp"
#include "homotomo/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace homotomo;

namespace {

struct Moments {
  double mean = 0.0, var = 0.0;
};

Moments moments(const std::vector<QuadratureRecord>& r) {
  Moments m;
  for (const auto& q : r) m.mean += q.x;
  m.mean /= r.size();
  for (const auto& q : r) m.var += (q.x - m.mean) * (q.x - m.mean);
  m.var /= r.size() - 1;
  return m;
}

SampleSpec spec_for(const Eigen::MatrixXcd& rho, std::size_t n, std::uint64_t seed, double eta = 1.0) {
  SampleSpec s;
  s.rho = rho;
  s.count = n;
  s.seed = seed;
  s.eta = eta;
  return s;
}

}  // namespace

TEST(Sampler, DeterministicAcrossThreadCounts) {
  SampleSpec s = spec_for(state_coherent({0.5, 0.1}, 10).rho, 150'000, 99);
  s.chunk_size = 10'000;
  s.threads = 1;
  const auto one = sample(s);
  s.threads = 4;
  const auto four = sample(s);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    ASSERT_EQ(one[i].x, four[i].x);
    ASSERT_EQ(one[i].phi, four[i].phi);
  }
}

TEST(Sampler, SeedChangesStream) {
  const Eigen::MatrixXcd rho = state_fock(0, 4).rho;
  EXPECT_NE(sample(spec_for(rho, 10, 1))[0].x, sample(spec_for(rho, 10, 2))[0].x);
}

TEST(Sampler, VacuumVarianceIsQuarter) {
  const Moments m = moments(sample(spec_for(state_fock(0, 4).rho, 200'000, 5)));
  EXPECT_NEAR(m.mean, 0.0, 4.0 * 0.5 / std::sqrt(2e5));
  EXPECT_NEAR(m.var, 0.25, 0.005);
}

TEST(Sampler, SmearedFockOneVariance) {
  // additive noise of variance (1 - eta)/(4 eta): 3/4 + 1/4 at eta = 1/2
  const auto r = sample(spec_for(state_fock(1, 4).rho, 200'000, 6, 0.5));
  EXPECT_NEAR(moments(r).var, 1.0, 0.015);
  for (const auto& q : r) ASSERT_EQ(q.eta, 0.5);
}

TEST(Sampler, PhasesAreUniformAndGridIsExact) {
  const auto r = sample(spec_for(state_fock(0, 3).rho, 100'000, 8));
  double mean = 0.0;
  for (const auto& q : r) {
    ASSERT_GE(q.phi, 0.0);
    ASSERT_LT(q.phi, std::numbers::pi);
    mean += q.phi;
  }
  EXPECT_NEAR(mean / r.size(), std::numbers::pi / 2, 0.02);

  SampleSpec g = spec_for(state_fock(0, 3).rho, 40, 8);
  g.scheme = PhaseScheme::Grid;
  g.grid_points = 4;
  for (const auto& q : sample(g)) {
    const double j = q.phi * 4 / std::numbers::pi;
    EXPECT_NEAR(j, std::round(j), 1e-12);
  }
}

TEST(Sampler, CoherentMeanFollowsPhase) {
  SampleSpec g = spec_for(state_coherent(0.8, 16).rho, 100'000, 10);
  g.scheme = PhaseScheme::Grid;
  g.grid_points = 2;  // phases 0 and pi/2
  const auto r = sample(g);
  double m0 = 0.0, m1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (const auto& q : r) {
    if (q.phi == 0.0) {
      m0 += q.x;
      ++n0;
    } else {
      m1 += q.x;
      ++n1;
    }
  }
  EXPECT_NEAR(m0 / n0, 0.8, 0.01);
  EXPECT_NEAR(m1 / n1, 0.0, 0.01);
}

TEST(QuadratureTableTest, InverseCdfIsAccurate) {
  const Eigen::MatrixXcd rho = state_coherent({0.6, -0.4}, 14).rho;
  const QuadratureTable t(rho);
  for (double phi : {0.0, 1.3, 2.9}) {
    EXPECT_NEAR(t.cdf(-t.half_width(), phi), 0.0, 1e-12);
    EXPECT_NEAR(t.cdf(t.half_width(), phi), 1.0, 1e-10);
    for (double u : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999999}) EXPECT_NEAR(t.cdf(t.inverse_cdf(u, phi), phi), u, 1e-9);
    for (double x : {-0.5, 0.2, 1.1}) EXPECT_NEAR(t.pdf(x, phi), quadrature_pdf(rho, phi, x), 1e-10);
  }
}

TEST(Goodness, AcceptsCorrectAndRejectsWrongState) {
  const Eigen::MatrixXcd rho = state_coherent(0.8, 14).rho;
  const auto r = sample(spec_for(rho, 80'000, 12));
  EXPECT_TRUE(empirical_check(r, rho, 1.0).passed);
  EXPECT_FALSE(empirical_check(r, state_fock(0, 14).rho, 1.0).passed);
}

TEST(Goodness, SmearedData) {
  const Eigen::MatrixXcd rho = state_fock(1, 6).rho;
  const auto r = sample(spec_for(rho, 60'000, 13, 0.7));
  EXPECT_TRUE(empirical_check(r, rho, 0.7).passed);
  EXPECT_FALSE(empirical_check(r, rho, 1.0).passed);
}

TEST(Rng, UniformOpenNeverHitsEndpoints) {
  auto g = chunk_engine(1, 0);
  for (int i = 0; i < 100'000; ++i) {
    const double u = uniform_open(g);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
