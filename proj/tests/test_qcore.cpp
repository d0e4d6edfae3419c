#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "qultra/qcore.hpp"

using namespace qultra;

namespace {

double rel_err(complex got, const oracle::cplx& want) {
  const complex w = oracle::lower(want);
  return std::abs(got - w) / std::max(1e-300, std::abs(w));
}

}  // namespace

TEST(QBase, RejectsBasesOutsideUnitDisk) {
  EXPECT_THROW(QBase(0.0), DomainError);
  EXPECT_THROW(QBase(1.0), DomainError);
  EXPECT_THROW(QBase(complex(0.8, 0.8)), DomainError);
  EXPECT_THROW(QBase(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_NO_THROW(QBase(complex(0.3, 0.4)));
}

TEST(QBase, RealValueNeedsRealPositiveBase) {
  EXPECT_DOUBLE_EQ(QBase(0.3).real_value(), 0.3);
  EXPECT_THROW(QBase(-0.3).real_value(), DomainError);
  EXPECT_THROW(QBase(complex(0.3, 0.1)).real_value(), DomainError);
  EXPECT_NEAR(std::abs(QBase(0.5).squared().value() - 0.25), 0.0, 1e-16);
}

TEST(TruncationPolicy, ValidateRejectsNonPositiveTolerances) {
  TruncationPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.rel_tol = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.abs_tol = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.tail_window = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.max_terms = 1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(SpectralPoint, XInsideIntervalMapsToUpperUnitCircle) {
  const auto p = SpectralPoint::from_x(0.3);
  EXPECT_NEAR(std::abs(p.z()), 1.0, 1e-15);
  EXPECT_GE(p.z().imag(), 0.0);
  EXPECT_NEAR(std::abs(p.x() - 0.3), 0.0, 1e-15);
}

TEST(SpectralPoint, XOutsideIntervalMapsToRealRoot) {
  const auto p = SpectralPoint::from_x(1.25);
  EXPECT_DOUBLE_EQ(p.z().real(), 2.0);
  EXPECT_EQ(p.z().imag(), 0.0);
  const auto m = SpectralPoint::from_x(-1.25);
  EXPECT_DOUBLE_EQ(m.z().real(), -0.5);
}

TEST(SpectralPoint, RejectsZeroAndNonFinite) {
  EXPECT_THROW(SpectralPoint(complex(0.0, 0.0)), DomainError);
  EXPECT_THROW(SpectralPoint::from_x(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(Poch, FiniteMatchesQuadOracle) {
  gen::Source g(11);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.1, 2.5);
    const complex q = g.polar(0.1, 0.9);
    const int k = g.integer(-12, 25);
    const double err = rel_err(poch(a, QBase(q), k), oracle::poch(oracle::lift(a), oracle::lift(q), k));
    EXPECT_LT(err, 1e-13) << "a=" << a << " q=" << q << " k=" << k;
  }
}

TEST(Poch, KnownValues) {
  const QBase q(0.5);
  EXPECT_EQ(poch(0.3, q, 0), complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(poch(0.3, q, 2) - 0.7 * 0.85), 0.0, 1e-16);
  // (a;q)_{-1} = 1/(1 - a/q)
  EXPECT_NEAR(std::abs(poch(0.3, q, -1) - 1.0 / (1.0 - 0.6)), 0.0, 1e-15);
}

TEST(Poch, TerminatesOnNonPositiveLatticeExponent) {
  const QBase q(0.4);
  const complex a = std::pow(0.4, -3);  // q^{-3}
  EXPECT_NE(poch(a, q, 3), complex(0.0, 0.0));
  EXPECT_EQ(poch(a, q, 4), complex(0.0, 0.0));
  EXPECT_EQ(poch(a, q, 10), complex(0.0, 0.0));
  EXPECT_EQ(poch(1.0, q, 1), complex(0.0, 0.0));
}

TEST(Poch, NegativeIndexPoleRaisesWithExponent) {
  const QBase q(0.4);
  try {
    poch(0.4 * 0.4, q, -3);  // a = q^2 hits the factor j = 2
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_EQ(e.factor_index(), 2);
  }
  EXPECT_NO_THROW(poch(0.4 * 0.4, q, -1));
}

TEST(Poch, InfiniteMatchesQuadOracle) {
  gen::Source g(12);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.05, 3.0);
    const complex q = g.polar(0.05, 0.85);
    const double err = rel_err(poch(a, QBase(q), infinity), oracle::poch_inf(a, q));
    EXPECT_LT(err, 1e-12) << "a=" << a << " q=" << q;
  }
}

TEST(Poch, InfiniteVanishesOnLattice) {
  EXPECT_EQ(poch(std::pow(0.5, -2), QBase(0.5), infinity), complex(0.0, 0.0));
  EXPECT_EQ(poch(1.0, QBase(0.5), infinity), complex(0.0, 0.0));
}

TEST(Poch, InfiniteHonoursTermCap) {
  TruncationPolicy p;
  p.max_terms = 5;
  EXPECT_THROW(poch(0.5, QBase(0.99), infinity, p), NonConvergence);
}

TEST(PochProperty, SplitsOverIndexSums) {
  gen::Source g(13);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.1, 0.9);
    const QBase q(g.polar(0.2, 0.8));
    const int m = g.integer(-6, 10), n = g.integer(-6, 10);
    const complex lhs = poch(a, q, m + n);
    const complex rhs = poch(a, q, m) * poch(a * qpow(q.value(), m), q, n);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::max(1.0, std::abs(lhs))) << "m=" << m << " n=" << n;
  }
}

TEST(PochProperty, InfiniteFactorsThroughFinite) {
  gen::Source g(14);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.1, 2.0);
    const QBase q(g.polar(0.2, 0.8));
    const int k = g.integer(0, 15);
    const complex lhs = poch(a, q, infinity);
    const complex rhs = poch(a, q, k) * poch(a * qpow(q.value(), k), q, infinity);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(PochMulti, ProductOfFactorsAndFactorIndexInMessage) {
  const QBase q(0.5);
  const complex v = poch_multi({0.2, 0.3}, q, 4);
  EXPECT_LT(std::abs(v - poch(0.2, q, 4) * poch(0.3, q, 4)), 1e-15);
  try {
    poch_multi({0.2, 0.25}, q, -3);
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_NE(std::string(e.what()).find("factor 1"), std::string::npos);
  }
}

TEST(PochPm, IsProductOverConjugateArguments) {
  const auto p = SpectralPoint::from_theta(0.7);
  const QBase q(0.3);
  const complex v = poch_pm(0.6, p, q);
  EXPECT_LT(std::abs(v - poch(0.6 * p.z(), q, infinity) * poch(0.6 / p.z(), q, infinity)), 1e-15);
  EXPECT_LT(std::abs(v.imag()), 1e-15);
}

TEST(CompensatedSum, RecoversCancelledLowOrderBits) {
  CompensatedSum s;
  s.add(complex(1.0, 1.0));
  for (int i = 0; i < 1000; ++i) s.add(complex(1e-16, -1e-16));
  s.add(complex(-1.0, -1.0));
  EXPECT_NEAR(s.value().real(), 1e-13, 1e-25);
  EXPECT_NEAR(s.value().imag(), -1e-13, 1e-25);
}

TEST(LatticeExponent, DetectsIntegerPowers) {
  const complex q = 0.3;
  EXPECT_EQ(lattice_exponent(std::pow(0.3, 4), q), 4);
  EXPECT_EQ(lattice_exponent(std::pow(0.3, -2), q), -2);
  EXPECT_FALSE(lattice_exponent(0.31, q).has_value());
}
