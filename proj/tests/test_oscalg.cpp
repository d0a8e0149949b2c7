#include "homotomo/errors.hpp"
#include "homotomo/fock.hpp"
#include "homotomo/identities.hpp"
#include "homotomo/phase_poly.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace homotomo;

namespace {

using P = PhasePolyOperator;

Coeff q(long num, long den = 1) { return Coeff(CRational(mpq_class(num, den))); }

}  // namespace

TEST(Exact, IntegerFunctions) {
  EXPECT_EQ(binomial_exact(10, 3), 120);
  EXPECT_EQ(binomial_exact(5, 7), 0);
  EXPECT_EQ(factorial_exact(20), mpz_class("2432902008176640000"));
  EXPECT_EQ(factorial_exact(0), 1);
}

TEST(Exact, ComplexRationalArithmetic) {
  const CRational z(mpq_class(1, 2), mpq_class(-3, 4));
  EXPECT_EQ(z * z.inverse(), CRational(1));
  EXPECT_EQ(CRational::i() * CRational::i(), CRational(-1));
  EXPECT_EQ(z * z.conj(), CRational(z.norm()));
  EXPECT_EQ(pow(CRational::i(), 4), CRational(1));
  EXPECT_EQ((z - z).is_zero(), true);
}

TEST(PhasePoly, CanonicalCommutator) {
  const P a = P::annihilation(), ad = P::creation();
  EXPECT_EQ(wick_multiply(a, ad) - wick_multiply(ad, a), P(1));
  EXPECT_EQ(wick_multiply(a, ad), P::term(1, 1, 0) + P(1));
}

TEST(PhasePoly, QuadratureSquareFrozen) {
  // X^2 = (a^dag^2 e^{2i phi} + a^2 e^{-2i phi} + 2 a^dag a + 1) / 4
  const P expect = P::term(2, 0, 2, q(1, 4)) + P::term(0, 2, -2, q(1, 4)) + P::term(1, 1, 0, q(1, 2)) + P(q(1, 4));
  EXPECT_EQ(quadrature_power(2), expect);
  EXPECT_EQ(wick_multiply(P::quadrature(), P::quadrature()), expect);
  EXPECT_EQ(phase_average(expect), P::term(1, 1, 0, q(1, 2)) + P(q(1, 4)));
}

TEST(PhasePoly, HermiteOfQuadratureLowOrders) {
  EXPECT_EQ(hermite_of_quadrature(0), P(1));
  EXPECT_EQ(hermite_of_quadrature(1), P::quadrature() * q(2));
  EXPECT_EQ(hermite_of_quadrature(2), quadrature_power(2) * q(4) - P(1));
}

TEST(PhasePoly, PowerMatchesRepeatedProduct) {
  const P A = P::quadrature() + P::term(1, 1, 0);
  P r = P(1);
  for (int j = 0; j < 4; ++j) r = wick_multiply(r, A);
  EXPECT_EQ(power(A, 4), r);
}

TEST(PhasePoly, QuadratureIsSelfAdjoint) {
  for (int j = 1; j <= 6; ++j) EXPECT_EQ(quadrature_power(j).adjoint(), quadrature_power(j));
}

TEST(PhasePoly, ReorderNormalToSymmetric) {
  // a^dag a = {a^dag a}_sym - 1/2
  const P n = P::term(1, 1, 0);
  EXPECT_EQ(reorder(n, OrderingTag::normal(), OrderingTag::symmetric()), n - P(q(1, 2)));
  EXPECT_EQ(reorder(n, OrderingTag::normal(), OrderingTag::antinormal()), n - P(1));
}

TEST(PhasePoly, ReorderRoundTrip) {
  const P A = P::term(3, 2, 1) + P::term(2, 2, 0, q(-5, 3)) + P::term(0, 4, -2);
  for (const auto& [s, t] : {std::pair{OrderingTag::normal(), OrderingTag::symmetric()},
                             std::pair{OrderingTag::symmetric(), OrderingTag::antinormal()},
                             std::pair{OrderingTag::normal(), OrderingTag{mpq_class(1, 3)}}})
    EXPECT_EQ(reorder(reorder(A, s, t), t, s), A);
}

TEST(PhasePoly, MatrixOfQuadrature) {
  for (double phi : {0.0, 0.4, 2.1}) {
    const Eigen::MatrixXcd X = to_matrix(P::quadrature(), 8, phi);
    EXPECT_LT((X - quadrature_operator(8, phi)).norm(), 1e-14);
  }
}

TEST(PhasePoly, EvaluatePhase) {
  const P A = P::term(1, 0, 1) + P::term(0, 1, -1);
  const P at_i = evaluate_phase(A, CRational::i());
  EXPECT_EQ(at_i, P::term(1, 0, 0, Coeff(CRational::i())) + P::term(0, 1, 0, Coeff(-CRational::i())));
}

TEST(PhasePoly, BudgetIsEnforced) {
  DegreeBudget small;
  small.max_degree = 4;
  EXPECT_THROW(quadrature_power(6, small), ResourceError);
  DegreeBudget few;
  few.max_terms = 3;
  EXPECT_THROW(quadrature_power(4, few), ResourceError);
}

TEST(PhasePoly, DivideOneMinusPhase) {
  const P X = quadrature_power(3);
  const P prod = X - X.shifted(2);
  P rem;
  EXPECT_EQ(divide_one_minus_phase(prod, 2, &rem), X);
  EXPECT_TRUE(rem.is_zero());
  divide_one_minus_phase(X, 2, &rem);
  EXPECT_FALSE(rem.is_zero());
}

TEST(Identities, NamesRoundTrip) {
  for (IdentityId id : {IdentityId::MainEquiv, IdentityId::HermiteEquiv, IdentityId::TruncHermite, IdentityId::Richter,
                        IdentityId::Symm, IdentityId::SOrder, IdentityId::MuNu, IdentityId::Resample,
                        IdentityId::Poisson, IdentityId::DisplacementSeries})
    EXPECT_EQ(parse_identity(identity_name(id)), id);
  EXPECT_FALSE(parse_identity("NOT_AN_IDENTITY").has_value());
  EXPECT_EQ(identity_name(IdentityId::Richter), "RICHTER");
}

TEST(Identities, FullSuiteHasZeroResiduals) {
  const auto reports = run_identity_suite();
  EXPECT_GT(reports.size(), 500u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed) << identity_name(r.id) << " " << r.params << " " << r.note;
    EXPECT_TRUE(r.residual.is_zero()) << r.residual.str();
  }
}

TEST(Identities, SingleIdentityRestriction) {
  const auto reports = run_identity_suite({}, IdentityId::SOrder);
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) EXPECT_EQ(r.id, IdentityId::SOrder);
}

TEST(Identities, OrderingParameterRange) {
  for (int s : {-1, 0, 1}) {
    IdentityParams p;
    p.p = 3;
    p.q = 2;
    p.s = s;
    EXPECT_TRUE(verify_identity(IdentityId::SOrder, p).passed) << "s = " << s;
  }
}

TEST(Identities, PoissonBothParities) {
  for (bool odd : {false, true})
    for (int k = 0; k <= 5; ++k) {
      IdentityParams p;
      p.p = k;
      p.odd = odd;
      EXPECT_TRUE(verify_identity(IdentityId::Poisson, p).passed) << "k = " << k << " odd = " << odd;
    }
}

TEST(Identities, DegreeBeyondBudgetThrows) {
  IdentityParams p;
  p.p = 30;
  EXPECT_THROW(verify_identity(IdentityId::MainEquiv, p), ResourceError);
  p.p = -1;
  EXPECT_THROW(verify_identity(IdentityId::MainEquiv, p), std::invalid_argument);
}
