#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "qultra/ultraspherical.hpp"

using namespace qultra;

namespace {

double close(complex got, complex want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST(ClassicalCn, LowDegreesInClosedForm) {
  const QBase q(0.3);
  const auto p = SpectralPoint::from_theta(0.9);
  EXPECT_EQ(classical_cn(0, p, 0.8, q), complex(1.0, 0.0));
  EXPECT_LT(close(classical_cn(1, p, 0.8, q), 2.0 * (1.0 - 0.8) / (1.0 - 0.3) * p.x()), 1e-15);
  EXPECT_EQ(classical_cn(-1, p, 0.8, q), complex(0.0, 0.0));
}

TEST(ClassicalCn, BetaEqualToQGivesChebyshevSecondKind) {
  const double theta = 1.1;
  const auto p = SpectralPoint::from_theta(theta);
  for (int n = 0; n <= 10; ++n) {
    const double u = std::sin((n + 1) * theta) / std::sin(theta);
    EXPECT_LT(close(classical_cn(n, p, 0.4, QBase(0.4)), u), 1e-13) << n;
  }
}

TEST(ClassicalCn, MatchesQuadOracle) {
  gen::Source g(31);
  for (int i = 0; i < gen::kCases; ++i) {
    const double beta = g.uniform(-0.9, 0.9), q = g.uniform(0.1, 0.8);
    const int n = g.integer(0, 12);
    const auto p = SpectralPoint::from_theta(g.theta());
    const complex want = oracle::lower(oracle::classical(n, p.z(), beta, q));
    EXPECT_LT(close(classical_cn(n, p, beta, QBase(q)), want), 1e-12) << i;
  }
}

TEST(BilateralCn, MatchesQuadOracle) {
  gen::Source g(32);
  for (int i = 0; i < gen::kCases; ++i) {
    const double q = g.uniform(0.1, 0.5), beta = g.uniform(0.6, 0.95), gamma = g.uniform(0.3, 0.9);
    const int n = g.integer(-8, 8);
    const auto p = SpectralPoint::from_theta(g.theta());
    const auto got = bilateral_cn(n, p, {beta, gamma, QBase(q)});
    const complex want = oracle::lower(oracle::bilateral(n, p.z(), beta, gamma, q, 400));
    EXPECT_LT(close(got.value, want), 1e-12) << "case " << i << " n=" << n;
    EXPECT_GT(got.truncation_terms, 1);
  }
}

TEST(BilateralCn, AgreesWithTwoPsiTwoForm) {
  gen::Source g(33);
  for (int i = 0; i < gen::kCases; ++i) {
    const double q = g.uniform(0.1, 0.5), beta = g.uniform(0.6, 0.95), gamma = g.uniform(0.3, 0.9);
    const int n = g.integer(-6, 6);
    const auto p = SpectralPoint::from_theta(g.theta());
    const UltraParams params{beta, gamma, QBase(q)};
    EXPECT_LT(close(bilateral_cn(n, p, params).value, bilateral_cn_via_psi(n, p, params).value), 1e-12) << i;
  }
}

TEST(BilateralCn, GammaOneReducesToClassical) {
  gen::Source g(34);
  for (int i = 0; i < gen::kCases; ++i) {
    const double q = g.uniform(0.1, 0.6), beta = g.uniform(0.7, 0.95);
    const int n = g.integer(-3, 10);
    const auto p = SpectralPoint::from_theta(g.theta());
    EXPECT_LT(close(bilateral_cn(n, p, {beta, 1.0, QBase(q)}).value, classical_cn(n, p, beta, QBase(q))), 1e-12)
        << i;
  }
}

TEST(BilateralCn, PoleLatticeGammaRaises) {
  const QBase q(0.3);
  const auto p = SpectralPoint::from_theta(1.0);
  EXPECT_THROW(bilateral_cn(0, p, {0.8, std::pow(0.3, -2), q}), PoleError);
}

TEST(BilateralCn, OutsideRegionRaises) {
  const QBase q(0.3);
  // At |z|^2 = q the k >= 0 side needs 1/beta < 1.
  EXPECT_THROW(bilateral_cn(0, SpectralPoint(complex(std::sqrt(0.3), 0.0)), {0.8, 0.7, q}), RegionError);
  EXPECT_THROW(bilateral_cn(0, SpectralPoint::from_theta(1.0), {0.2, 0.7, q}), RegionError);
  EXPECT_THROW(bilateral_cn(0, SpectralPoint::from_theta(1.0), {0.0, 0.7, q}), DomainError);
}

TEST(BilateralCn, RealParametersGiveRealValuesOnUnitCircle) {
  const auto v = bilateral_cn(3, SpectralPoint::from_theta(2.0), {0.8, 0.7, QBase(0.3)});
  EXPECT_LT(std::abs(v.value.imag()), 1e-14);
}

TEST(BilateralCn, HonoursTermCap) {
  TruncationPolicy p;
  p.max_terms = 4;
  EXPECT_THROW(bilateral_cn(0, SpectralPoint::from_theta(1.0), {0.8, 0.7, QBase(0.3)}, p), NonConvergence);
}

TEST(BilateralProperty, ThreeTermRecurrence) {
  gen::Source g(35);
  for (int i = 0; i < gen::kCases; ++i) {
    const UltraParams params{g.uniform(0.6, 0.95), g.uniform(0.3, 0.9), QBase(g.uniform(0.1, 0.5))};
    const auto p = SpectralPoint::from_theta(g.theta());
    const int n = g.integer(-6, 6);
    EXPECT_LT(recurrence_residual(UltraKind::bilateral, n, p, params), 1e-11) << i;
    if (n >= 1) EXPECT_LT(recurrence_residual(UltraKind::classical, n, p, params), 1e-11);
  }
  EXPECT_THROW(recurrence_residual(UltraKind::classical, 0, SpectralPoint::from_theta(1.0), {0.8, 1.0, QBase(0.3)}),
               DomainError);
}

TEST(BilateralProperty, IndexReflectionSymmetry) {
  gen::Source g(36);
  for (int i = 0; i < gen::kCases; ++i) {
    const UltraParams params{g.uniform(0.6, 0.95), g.uniform(0.3, 0.9), QBase(g.uniform(0.1, 0.5))};
    const auto p = SpectralPoint::from_theta(g.theta());
    EXPECT_LT(symmetry_residual(g.integer(-4, 4), p, params), 1e-11) << i;
  }
}

TEST(BilateralCn, ValuesAtXZeroMatchConstantTerms) {
  const UltraParams params{0.8, 0.7, QBase(0.3)};
  const SpectralPoint i(complex(0.0, 1.0));
  for (int n = -4; n <= 4; ++n) {
    const complex direct = bilateral_value(n, i, params);
    EXPECT_LT(close(direct, constant_term(n, params)), 1e-12) << n;
    if (n % 2 != 0) EXPECT_LT(std::abs(direct), 1e-12);
  }
}

TEST(GeneratingFunction, BilateralSumMatchesProduct) {
  gen::Source g(37);
  for (int i = 0; i < 12; ++i) {
    const double q = g.uniform(0.1, 0.4);
    const UltraParams params{g.uniform(0.7, 0.95), g.uniform(0.4, 0.9), QBase(q)};
    const auto p = SpectralPoint::from_theta(g.theta());
    const complex t = std::polar(g.uniform(q / 0.7 + 0.1, 0.85), g.uniform(-3.0, 3.0));
    const auto s = generating_sum(UltraKind::bilateral, t, p, params);
    const complex rhs = generating_rhs(UltraKind::bilateral, t, p, params);
    EXPECT_LT(std::abs(s.value - rhs) / std::abs(rhs), 1e-10) << i;
    EXPECT_GT(s.truncation_terms, 5);
  }
}

TEST(GeneratingFunction, ClassicalSumMatchesProduct) {
  const UltraParams params{0.8, 1.0, QBase(0.3)};
  const auto p = SpectralPoint::from_theta(0.7);
  const auto s = generating_sum(UltraKind::classical, 0.6, p, params);
  EXPECT_LT(close(s.value, generating_rhs(UltraKind::classical, 0.6, p, params)), 1e-12);
}

TEST(GeneratingFunction, AnnulusEnforced) {
  const UltraParams params{0.8, 0.7, QBase(0.3)};
  const auto p = SpectralPoint::from_theta(0.7);
  EXPECT_THROW(generating_rhs(UltraKind::bilateral, 0.3, p, params), RegionError);
  EXPECT_THROW(generating_rhs(UltraKind::bilateral, 1.1, p, params), RegionError);
  EXPECT_THROW(generating_rhs(UltraKind::classical, 1.0, p, params), RegionError);
}

TEST(SpecialValues, DegreeZeroAtFourthRootOfQ) {
  for (double q : {0.3, 0.5}) {
    const UltraParams params{0.8, 0.7, QBase(q)};
    const complex direct = bilateral_value(0, special_point_c0(params.q), params);
    EXPECT_LT(std::abs(direct - special_value_c0(params)) / std::abs(direct), 1e-11) << q;
  }
}

TEST(SpecialValues, DegreeMinusOneAtRootOfQDirectSumIsAccurate) {
  // Checks the series value only; the closed form is exercised by the acceptance run.
  const double q = 0.3;
  const UltraParams params{1.5, 0.7, QBase(q)};
  const complex z = std::sqrt(q);
  const complex direct = bilateral_value(-1, special_point_cm1(params.q), params);
  const complex want = oracle::lower(oracle::bilateral(-1, z, 1.5, 0.7, q, 400));
  EXPECT_LT(close(direct, want), 1e-12);
  EXPECT_DOUBLE_EQ(special_point_cm1(params.q).z().real(), std::sqrt(q));
}

TEST(Linearization, ProductExpandsIntoClassicalPolynomials) {
  gen::Source g(38);
  for (int i = 0; i < gen::kCases; ++i) {
    const double beta = g.uniform(-0.9, 0.9), q = g.uniform(0.1, 0.8);
    const int m = g.integer(0, 6), n = g.integer(0, 6);
    EXPECT_LT(linearization_residual(m, n, SpectralPoint::from_theta(g.theta()), beta, QBase(q)), 1e-11) << i;
  }
  EXPECT_THROW(linearization_residual(-1, 2, SpectralPoint::from_theta(1.0), 0.5, QBase(0.3)), DomainError);
}
