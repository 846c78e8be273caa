#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotlab/convergents.hpp"
#include "rotlab/error.hpp"

using namespace rotlab;

namespace {

void expect_matches_surd(const AlphaSpec& alpha, long P, long D, long Q) {
  const auto want = oracle::surd_digits(P, D, Q, 31);
  const auto got = expand(alpha, 31);
  ASSERT_EQ(got, want);
  const auto rows = oracle::convergent_rows(want, 30);
  const auto table = convergents(alpha, 30);
  ASSERT_EQ(table.size(), 31u);
  for (std::size_t k = 0; k <= 30; ++k) {
    EXPECT_EQ(table[k].p, rows[k].p) << "k=" << k;
    EXPECT_EQ(table[k].q, rows[k].q) << "k=" << k;
  }
}

}  // namespace

TEST(ContinuedFraction, GoldenMatchesSurdOracle) { expect_matches_surd(AlphaSpec::golden(), -1, 5, 2); }

TEST(ContinuedFraction, Sqrt2MatchesSurdOracle) {
  expect_matches_surd(AlphaSpec::sqrt2_minus_1(), -1, 2, 1);
}

TEST(ContinuedFraction, GeneralSurd) {
  // (sqrt 7 - 2) / 3 = [0; 1, 1, 4, 1, 1, 4, ...]
  const AlphaSpec a(QuadraticSurd{-2, 7, 3});
  EXPECT_EQ(expand(a, 12), oracle::surd_digits(-2, 7, 3, 12));
  // (sqrt 13 - 3) / 2
  const AlphaSpec b(QuadraticSurd{-3, 13, 2});
  EXPECT_EQ(expand(b, 20), oracle::surd_digits(-3, 13, 2, 20));
}

TEST(ContinuedFraction, FibonacciDenominators) {
  const auto t = convergents(AlphaSpec::golden(), 10);
  const std::uint64_t fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_EQ(t[k].q, fib[k]);
}

TEST(ContinuedFraction, LiteralAgreesWithSurd) {
  const AlphaSpec lit(PrecisionLiteral{
      "0.41421356237309504880168872420969807856967187537694807317667973799073", 200});
  EXPECT_EQ(expand(lit, 40), expand(AlphaSpec::sqrt2_minus_1(), 40));
}

TEST(ContinuedFraction, RationalLiteralRaises) {
  const AlphaSpec lit(PrecisionLiteral{"0.25", 64});
  try {
    expand(lit, 5);
    FAIL();
  } catch (const RationalInputError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRationalInput);
    EXPECT_EQ(e.digits(), (std::vector<Digit>{4}));
  }
}

TEST(ContinuedFraction, ShortLiteralExhaustsPrecision) {
  const AlphaSpec lit(PrecisionLiteral{"0.6180339887", 16});
  try {
    expand(lit, 15);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecisionExhausted);
  }
}

TEST(ContinuedFraction, PerfectSquareSurdIsRational) {
  try {
    expand(AlphaSpec(QuadraticSurd{-1, 4, 3}), 3);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRationalInput);
  }
}

TEST(ContinuedFraction, DeltaBoundsHold) {
  for (const auto& alpha : {AlphaSpec::golden(), AlphaSpec::sqrt2_minus_1(),
                            AlphaSpec::from_digits({3, 1, 7, 15, 1, 292, 1, 1}, 2)}) {
    const auto t = convergents(alpha, 31);
    for (std::size_t k = 1; k <= 30; ++k) {
      const auto b = check_delta_bounds(t[k], t[k + 1].a);
      EXPECT_TRUE(b.pass) << k;
      EXPECT_GT(b.lower_slack, 0.0);
      EXPECT_GT(b.upper_slack, 0.0);
    }
  }
}

TEST(ContinuedFraction, CoprimeAndDeterminant) {
  const auto t = convergents(AlphaSpec::sqrt2_minus_1(), 30);
  for (std::size_t k = 1; k <= 30; ++k) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), t[k].p.get_mpz_t(), t[k].q.get_mpz_t());
    EXPECT_EQ(g, 1);
    // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k+1}
    const mpz_class det = t[k].p * t[k - 1].q - t[k - 1].p * t[k].q;
    EXPECT_EQ(det, (k % 2 == 1) ? 1 : -1);
  }
}

TEST(ContinuedFraction, DeltaSignAndEnclosure) {
  const mpq_class alpha = oracle::surd_value(-1, 5, 2, 80);
  const auto t = convergents(AlphaSpec::golden(), 25);
  for (std::size_t k = 0; k <= 25; ++k) {
    mpq_class d = mpq_class(t[k].q) * alpha - mpq_class(t[k].p);
    if (k % 2 == 1) d = -d;
    EXPECT_GT(d, 0);
    EXPECT_NEAR(t[k].delta(), d.get_d(), 1e-15 * d.get_d());
    EXPECT_LE(t[k].delta_lo, t[k].delta_hi);
  }
}

// Legendre: ||q alpha|| > ||q_k alpha|| for every 0 < q < q_{k+1}, q != q_k.
TEST(ContinuedFraction, BestApproximationsBruteForce) {
  const mpq_class alpha = oracle::surd_value(-1, 2, 1, 60);
  const auto t = convergents(AlphaSpec::sqrt2_minus_1(), 12);
  for (std::size_t k = 1; k + 1 <= 12; ++k) {
    const std::uint64_t qk = t[k].q.get_ui();
    const double best = t[k].delta();
    for (std::uint64_t q = 1; q < t[k + 1].q.get_ui(); ++q) {
      if (q == qk) continue;
      const double d = oracle::torus_norm(oracle::frac(mpq_class(q) * alpha).get_d());
      EXPECT_GT(d, best) << "k=" << k << " q=" << q;
    }
  }
}

TEST(ContinuedFraction, LocateConvergent) {
  const auto t = convergents(AlphaSpec::golden(), 20);
  EXPECT_EQ(locate_convergent(t, 0), 0u);
  EXPECT_EQ(locate_convergent(t, 1), 2u);
  for (std::uint64_t N = 1; N < 5000; N += 7) {
    const auto k = locate_convergent(t, N);
    EXPECT_LE(t[k - 1].q, N);
    EXPECT_LT(N, t[k].q);
  }
}

TEST(ContinuedFraction, DigitsOnlyTableEnclosesTruth) {
  const auto digits = expand(AlphaSpec::sqrt2_minus_1(), 15);
  const auto wide = convergents(digits, 12);
  const auto tight = convergents(AlphaSpec::sqrt2_minus_1(), 12);
  for (std::size_t k = 0; k <= 12; ++k) {
    EXPECT_EQ(wide[k].q, tight[k].q);
    EXPECT_LE(wide[k].delta_lo, tight[k].delta_lo);
    EXPECT_GE(wide[k].delta_hi, tight[k].delta_hi);
  }
}

TEST(Construction, ForcedQuotientAndRatio) {
  IndexPlan plan;
  plan.target_indices = {10};
  plan.forced_quotients = {{11, 10000}};
  const auto c = construct_alpha(plan);
  const auto d = expand(c.alpha, 12);
  EXPECT_EQ(d[10], 10000u);
  ASSERT_EQ(c.targets.size(), 1u);
  EXPECT_LE(c.targets[0].ratio, plan.theta);
  const auto good = find_good_indices(d, 11, accept_all(), plan.theta);
  EXPECT_NE(std::find(good.begin(), good.end(), 10u), good.end());
}

TEST(Construction, CongruenceSteering) {
  IndexPlan plan;
  plan.target_indices = {10};
  plan.forced_quotients = {{11, 100000}};
  plan.congruence = Congruence{1, 4};
  const auto c = construct_alpha(plan);
  const auto t = convergents(c.digits, 10);
  EXPECT_EQ(mpz_class(t[10].q % 4), 1);
  EXPECT_EQ(c.targets[0].q_mod, 1u);
}

TEST(Construction, RatioTooLargeFails) {
  IndexPlan plan;
  plan.target_indices = {10};
  plan.forced_quotients = {{11, 50}};
  plan.theta = 0.01;
  try {
    construct_alpha(plan);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstructionFailed);
  }
}

TEST(Construction, OddTargetRejectedForEvenParity) {
  IndexPlan plan;
  plan.target_indices = {9};
  plan.forced_quotients = {{10, 10000}};
  EXPECT_THROW(plan.validate(), LabError);
}

TEST(Construction, GoodIndicesCongruence) {
  const auto d = expand(AlphaSpec::from_digits({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 5000, 1, 1}), 13);
  const auto t = convergents(d, 12);
  const auto good = find_good_indices(d, 12, congruent_to(mpz_class(t[10].q % 3).get_ui(), 3), 0.01);
  EXPECT_EQ(good, (std::vector<std::size_t>{10}));
}
