#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "qultra/hyperseries.hpp"

using namespace qultra;

namespace {

double rel_to(complex got, complex want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

SeriesSpec phi_spec(std::vector<complex> a, std::vector<complex> b, double q, complex z) {
  return {SeriesKind::unilateral, std::move(a), std::move(b), QBase(q), z};
}

SeriesSpec psi_spec(std::vector<complex> a, std::vector<complex> b, double q, complex z) {
  return {SeriesKind::bilateral, std::move(a), std::move(b), QBase(q), z};
}

}  // namespace

TEST(EvalPhi, TwoPhiOneMatchesQuadOracle) {
  gen::Source g(21);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.1, 1.5), b = g.polar(0.1, 1.5), c = g.polar(0.05, 0.6);
    const complex z = g.polar(0.05, 0.8);
    const double q = g.uniform(0.1, 0.8);
    const auto got = eval_phi(phi_spec({a, b}, {c}, q, z));
    const complex want = oracle::lower(oracle::phi({a, b}, {c}, q, z, 500));
    EXPECT_LT(rel_to(got.value, want), 1e-11) << "case " << i;
    EXPECT_GT(got.terms, 1);
  }
}

TEST(EvalPhi, EntireSeriesWithExtraLowerParameters) {
  gen::Source g(22);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.1, 1.5), b = g.polar(0.1, 0.6), c = g.polar(0.1, 0.6);
    const complex z = g.polar(0.1, 5.0);
    const double q = g.uniform(0.1, 0.7);
    const auto got = eval_phi(phi_spec({a}, {b, c}, q, z));
    const complex want = oracle::lower(oracle::phi({a}, {b, c}, q, z, 200));
    EXPECT_LT(std::abs(got.value - want), 1e-11 * std::max(1.0, std::abs(want))) << "case " << i;
  }
}

TEST(EvalPhi, TerminatingSeriesIsExactPolynomial) {
  const double q = 0.4;
  const complex a = std::pow(q, -3);
  const auto got = eval_phi(phi_spec({a, 0.7}, {0.2}, q, 2.5));  // |z| > 1 is fine: 4 terms
  const complex want = oracle::lower(oracle::phi({a, 0.7}, {0.2}, q, 2.5, 3));
  EXPECT_LT(rel_to(got.value, want), 1e-14);
  EXPECT_LE(got.terms, 5);
}

TEST(EvalPhi, RegionAndPoleErrors) {
  EXPECT_THROW(eval_phi(phi_spec({0.5, 0.3}, {0.2}, 0.5, 1.0)), RegionError);
  EXPECT_THROW(eval_phi(phi_spec({0.5, 0.3, 0.1}, {0.2}, 0.5, 0.5)), RegionError);
  EXPECT_THROW(eval_phi(phi_spec({0.5}, {std::pow(0.5, -2)}, 0.5, 0.5)), PoleError);
  // A numerator zero before the pole index keeps the sum finite.
  EXPECT_NO_THROW(eval_phi(phi_spec({std::pow(0.5, -1)}, {std::pow(0.5, -2)}, 0.5, 0.5)));
  EXPECT_THROW(eval_phi(psi_spec({0.5}, {0.2}, 0.5, 0.5)), DomainError);
}

TEST(EvalPhi, HonoursTermCap) {
  TruncationPolicy p;
  p.max_terms = 20;
  EXPECT_THROW(eval_phi(phi_spec({0.5, 0.3}, {0.2}, 0.5, 0.999), p), NonConvergence);
}

TEST(EvalPsi, TwoPsiTwoMatchesQuadOracle) {
  gen::Source g(23);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.5, 0.9), b = g.polar(0.5, 0.9);
    const complex c = g.polar(0.1, 0.4), d = g.polar(0.1, 0.4);
    const double q = g.uniform(0.1, 0.7);
    const double inner = std::abs(c * d / (a * b));
    const complex z = std::polar(g.uniform(1.5 * inner, 0.7), g.uniform(-3.0, 3.0));
    const auto got = eval_psi(psi_spec({a, b}, {c, d}, q, z));
    const complex want = oracle::lower(oracle::psi({a, b}, {c, d}, q, z, 400));
    EXPECT_LT(std::abs(got.value - want), 1e-11 * std::max(1.0, std::abs(want))) << "case " << i;
  }
}

TEST(EvalPsi, WithZeroLowerParameters) {
  const double q = 0.3;
  const auto got = eval_psi(psi_spec({0.6, 0.7}, {0.2, 0.25, 0.0}, q, 0.4));
  const complex want = oracle::lower(oracle::psi({0.6, 0.7}, {0.2, 0.25, 0.0}, q, 0.4, 200));
  EXPECT_LT(rel_to(got.value, want), 1e-12);
}

TEST(EvalPsi, LowerParameterQReducesToOneSidedSeries) {
  const double q = 0.35;
  const auto psi = eval_psi(psi_spec({0.6}, {q}, q, 0.5));
  const auto phi = eval_phi(phi_spec({0.6}, {}, q, 0.5));
  EXPECT_LT(rel_to(psi.value, phi.value), 1e-14);
}

TEST(EvalPsi, RegionAndPoleErrors) {
  // 1psi1 needs |b/a| < |z| < 1.
  EXPECT_THROW(eval_psi(psi_spec({0.5}, {0.4}, 0.3, 0.7)), RegionError);
  EXPECT_THROW(eval_psi(psi_spec({0.5}, {0.1}, 0.3, 1.2)), RegionError);
  // An upper parameter q^e with e >= 1 is a pole on the k < 0 side.
  EXPECT_THROW(eval_psi(psi_spec({0.25}, {0.1}, 0.5, 0.7)), PoleError);
  EXPECT_THROW(eval_psi(phi_spec({0.5}, {0.1}, 0.5, 0.7)), DomainError);
}

TEST(EvalPsi, IdenticalPairsCancel) {
  const double q = 0.3;
  const auto with = eval_psi(psi_spec({0.6, 0.45}, {0.2, 0.45}, q, 0.5));
  const auto without = eval_psi(psi_spec({0.6}, {0.2}, q, 0.5));
  EXPECT_LT(rel_to(with.value, without.value), 1e-15);
}

TEST(ClosedForm, QBinomial) {
  gen::Source g(24);
  for (int i = 0; i < gen::kCases; ++i) {
    const std::vector<complex> p{g.polar(0.1, 2.0), g.polar(0.05, 0.85)};
    const QBase q(g.uniform(0.1, 0.8));
    const auto lhs = eval_phi(closed_form_lhs("q_binomial", p, q));
    EXPECT_LT(rel_to(lhs.value, closed_form("q_binomial", p, q)), 1e-12);
  }
}

TEST(ClosedForm, QGauss) {
  gen::Source g(25);
  int checked = 0;
  for (int i = 0; checked < gen::kCases; ++i) {
    const complex a = g.polar(0.8, 2.5), b = g.polar(0.8, 2.5), c = g.polar(0.05, 0.7);
    if (!(std::abs(c / (a * b)) < 0.8)) continue;
    const std::vector<complex> p{a, b, c};
    const QBase q(g.uniform(0.1, 0.7));
    const auto lhs = eval_phi(closed_form_lhs("q_gauss", p, q));
    EXPECT_LT(rel_to(lhs.value, closed_form("q_gauss", p, q)), 1e-11);
    ++checked;
  }
}

TEST(ClosedForm, RamanujanOnePsiOne) {
  gen::Source g(26);
  for (int i = 0; i < gen::kCases; ++i) {
    const complex a = g.polar(0.5, 0.95, 0.5), b = g.polar(0.05, 0.4, 0.5);
    const double inner = std::abs(b / a);
    const complex z = std::polar(g.uniform(inner + 0.1 * (0.9 - inner), 0.9), g.uniform(-3.0, 3.0));
    const std::vector<complex> p{a, b, z};
    const QBase q(g.uniform(0.1, 0.7));
    const auto lhs = eval_psi(closed_form_lhs("ramanujan_1psi1", p, q));
    EXPECT_LT(std::abs(lhs.value - closed_form("ramanujan_1psi1", p, q)) / std::max(1.0, std::abs(lhs.value)),
              1e-11)
        << "case " << i;
  }
}

TEST(ClosedForm, RamanujanOnePsiOneKnownValue) {
  // q = 0.5, a = 0.8, b = 0.2, z = 0.6 against the quad oracle on both sides.
  const std::vector<complex> p{0.8, 0.2, 0.6};
  const QBase q(0.5);
  const complex series = oracle::lower(oracle::psi({0.8}, {0.2}, 0.5, 0.6, 600));
  using oracle::poch_inf;
  const complex product = oracle::lower(poch_inf(0.5, 0.5) * poch_inf(0.48, 0.5) * poch_inf(0.5 / 0.48, 0.5) *
                                        poch_inf(0.25, 0.5) /
                                        (poch_inf(0.2, 0.5) * poch_inf(0.6, 0.5) * poch_inf(0.2 / 0.48, 0.5) *
                                         poch_inf(0.625, 0.5)));
  // Arguments such as q/(az) = 1.04 enter the quad products from doubles, so agreement is
  // limited by their conditioning.
  EXPECT_LT(rel_to(series, product), 1e-14);
  EXPECT_LT(rel_to(closed_form("ramanujan_1psi1", p, q), product), 1e-13);
  // The sum cancels to about 0.06 from terms of order one; accuracy is absolute.
  EXPECT_LT(std::abs(eval_psi(closed_form_lhs("ramanujan_1psi1", p, q)).value - product), 1e-12);
}

TEST(ClosedForm, QKummerTwoPsiTwo) {
  const QBase q(0.3);
  for (const std::vector<complex>& p : {std::vector<complex>{0.5, 0.8, 0.9}, std::vector<complex>{0.2, 0.7, -0.6},
                                        std::vector<complex>{complex(0.3, 0.2), 0.9, 0.75}}) {
    const auto lhs = eval_psi(closed_form_lhs("q_kummer_2psi2", p, q));
    EXPECT_LT(rel_to(lhs.value, closed_form("q_kummer_2psi2", p, q)), 1e-12);
  }
}

TEST(ClosedForm, BaileyThreePsiThree) {
  const QBase q(0.3);
  for (const char* name : {"bailey_3psi3_a", "bailey_3psi3_b"}) {
    for (const std::vector<complex>& p : {std::vector<complex>{0.7, 0.8, 0.9}, std::vector<complex>{0.6, -0.9, 0.75},
                                          std::vector<complex>{0.95, 0.85, 0.8}}) {
      const auto lhs = eval_psi(closed_form_lhs(name, p, q));
      EXPECT_LT(rel_to(lhs.value, closed_form(name, p, q)), 1e-11) << name;
    }
  }
}

TEST(ClosedForm, RejectsOutOfRegionAndUnknown) {
  const QBase q(0.5);
  EXPECT_THROW(closed_form("ramanujan_1psi1", {0.5, 0.4, 0.7}, q), RegionError);
  EXPECT_THROW(closed_form("q_binomial", {0.5, 1.5}, q), RegionError);
  EXPECT_THROW(closed_form("no_such_sum", {0.5}, q), DomainError);
  EXPECT_THROW(closed_form_lhs("q_gauss", {0.5}, q), DomainError);
}

TEST(Transform, FixedPointsAgree) {
  const QBase q(0.3);
  EXPECT_LT(transform_residual("bailey_2psi2_single", {0.8, 0.7, 0.1, 0.2, 0.5}, q), 1e-12);
  EXPECT_LT(transform_residual("bailey_2psi2_iterated", {0.8, 0.7, 0.1, 0.2, 0.5}, q), 1e-12);
  EXPECT_LT(transform_residual("wellpoised_6psi8", {0.4, 0.7, 0.8, 0.9, 0.6}, q), 1e-12);
}

TEST(Transform, ReportsTermsAndRejectsUnknown) {
  int terms = 0;
  transform_residual("bailey_2psi2_single", {0.8, 0.7, 0.1, 0.2, 0.5}, QBase(0.3), {}, &terms);
  EXPECT_GT(terms, 10);
  EXPECT_THROW(transform_residual("unknown", {0.1, 0.2, 0.3, 0.4, 0.5}, QBase(0.3)), DomainError);
  EXPECT_THROW(transform_residual("bailey_2psi2_single", {0.1}, QBase(0.3)), DomainError);
}

TEST(TransformProperty, RandomInRegionPoints) {
  gen::Source g(27);
  int checked = 0;
  for (int i = 0; checked < 3 * 15 && i < 1000; ++i) {
    const QBase q(g.uniform(0.15, 0.5));
    const std::vector<complex> two{g.uniform(0.6, 0.95), g.uniform(0.6, 0.95), g.uniform(0.05, 0.2),
                                   g.uniform(0.1, 0.3), g.uniform(0.3, 0.6)};
    const std::vector<complex> six{g.uniform(0.3, 0.6), g.uniform(0.55, 0.95), g.uniform(0.55, 0.95),
                                   g.uniform(0.55, 0.95), g.uniform(0.55, 0.95)};
    try {
      EXPECT_LT(transform_residual("bailey_2psi2_single", two, q), 1e-10);
      EXPECT_LT(transform_residual("bailey_2psi2_iterated", two, q), 1e-10);
      EXPECT_LT(transform_residual("wellpoised_6psi8", six, q), 1e-10);
      checked += 3;
    } catch (const RegionError&) {
    }
  }
  EXPECT_GE(checked, 45);
}
