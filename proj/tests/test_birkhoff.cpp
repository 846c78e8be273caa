#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotlab/birkhoff.hpp"
#include "rotlab/error.hpp"

using namespace rotlab;

namespace {

TorusPoint P(const char* s) { return TorusPoint::parse(s); }

// Total variation of a circle function on a uniform grid, plus the wrap.
double grid_variation(const JumpFunction& f, int cells) {
  double var = 0.0;
  double prev = evaluate(f, 0.0);
  for (int i = 1; i <= cells; ++i) {
    const double x = static_cast<double>(i) / cells;
    const double v = i == cells ? evaluate(f, 1.0 - 1e-12) : evaluate(f, x);
    var += std::fabs(v - prev);
    prev = v;
  }
  return var + std::fabs(evaluate(f, 0.0) - prev);
}

}  // namespace

TEST(Torus, PointArithmetic) {
  const TorusPoint a = P("3/4");
  const TorusPoint b = P("1/2");
  EXPECT_EQ(a + b, P("1/4"));
  EXPECT_EQ(b - a, P("3/4"));
  EXPECT_EQ(-a, P("1/4"));
  EXPECT_EQ(P("-0.25"), P("3/4"));
  EXPECT_DOUBLE_EQ(P("9/10").norm(), 0.1);
  EXPECT_EQ(TorusPoint::from_double(1.25), P("1/4"));
}

TEST(Torus, BuiltinsEvaluate) {
  const auto saw = JumpFunction::sawtooth();
  EXPECT_DOUBLE_EQ(evaluate(saw, P("0")), -0.5);
  EXPECT_DOUBLE_EQ(evaluate(saw, P("3/4")), 0.25);
  const auto ind = JumpFunction::indicator(P("1/3"));
  EXPECT_NEAR(evaluate(ind, P("0")), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(evaluate(ind, P("1/3")), -1.0 / 3.0, 1e-15);
  const auto sq = JumpFunction::frac_squared();
  EXPECT_NEAR(evaluate(sq, 0.5), 0.25 - 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(evaluate(sq, 0.0), -1.0 / 3.0, 1e-15);
}

TEST(Torus, ValidationErrors) {
  JumpFunction none{{{P("1/2"), 0.0}}, {}};
  try {
    none.validate();
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoJump);
  }
  JumpFunction dup{{{P("1/2"), 1.0}, {P("1/2"), -1.0}}, {}};
  EXPECT_THROW(dup.validate(), LabError);
  EXPECT_THROW(JumpFunction::indicator(P("0")), LabError);
  // mean of {x}^2 is 1/3, not 1/4
  auto off_mean = JumpFunction::polynomial_in_frac({-0.25, 0.0, 1.0});
  EXPECT_THROW(off_mean.validate(), LabError);
}

TEST(Torus, NormalFormOfCenteredIndicator) {
  // 1_[0,1/2) - 1/2 drops by 1 at 1/2 and rises by 1 at 0.
  const NormalForm h = normal_form(JumpFunction::indicator(P("1/2")));
  EXPECT_DOUBLE_EQ(h.total_jump, 0.0);
  double at0 = 0.0, athalf = 0.0;
  for (const auto& j : h.indicator_terms) {
    if (j.gamma == P("1/2")) athalf += j.H;
    if (j.gamma == P("0")) at0 += j.H;
  }
  EXPECT_DOUBLE_EQ(athalf, 1.0);
  EXPECT_DOUBLE_EQ(at0, -1.0);
  EXPECT_TRUE(h.shifted);
  for (const auto& j : h.shifted_jumps()) EXPECT_NE(j.gamma, P("0"));
}

TEST(Torus, NormalFormSawtoothIsItself) {
  const NormalForm h = normal_form(JumpFunction::sawtooth());
  EXPECT_DOUBLE_EQ(h.total_jump, 1.0);
  for (const char* x : {"0", "1/7", "1/2", "5/6"}) {
    EXPECT_DOUBLE_EQ(evaluate(h, P(x)), evaluate(JumpFunction::sawtooth(), P(x)));
  }
  EXPECT_EQ(normal_form(h).total_jump, h.total_jump);
}

TEST(Torus, NormalFormDifferenceIsContinuous) {
  const auto f = JumpFunction::polynomial_in_frac({1.0 / 6.0, -1.0, 1.0}, {{P("0"), 1.0}});
  const NormalForm h = normal_form(JumpFunction::frac_squared());
  double prev = evaluate(f, 0.0) - evaluate(h, TorusPoint());
  for (int i = 1; i < 2000; ++i) {
    const double x = i / 2000.0;
    const double d = evaluate(f, x) - evaluate(h, TorusPoint::from_double(x));
    EXPECT_LT(std::fabs(d - prev), 2e-3);
    prev = d;
  }
}

TEST(Torus, VariationMatchesGrid) {
  const std::vector<JumpFunction> fs = {
      JumpFunction::sawtooth(), JumpFunction::indicator(P("1/3")),
      JumpFunction::frac_squared(),
      JumpFunction::polynomial_in_frac({0.0, 0.0, 0.0}, {{P("1/4"), 2.0}, {P("2/3"), -0.5}})};
  for (const auto& f : fs) {
    EXPECT_NEAR(total_variation(f), grid_variation(f, 1 << 16), 1e-3);
  }
  EXPECT_DOUBLE_EQ(total_variation(normal_form(JumpFunction::sawtooth())), 2.0);
  EXPECT_DOUBLE_EQ(total_variation(JumpFunction::indicator(P("2/7"))), 2.0);
}

TEST(Birkhoff, WorkingBits) {
  EXPECT_EQ(working_bits(10, 64), 128u);
  EXPECT_EQ(working_bits(10, 200), 256u);
  EXPECT_GE(working_bits(std::uint64_t(1) << 62, 64), 134u);
  EXPECT_EQ(working_bits(1000, 256) % 64, 0u);
}

TEST(Birkhoff, MatchesExactOrbitOracle) {
  // p_60/q_60 stands in for the golden ratio: the orbits agree far below
  // any jump separation for N <= 2000.
  const mpq_class alpha_r = oracle::surd_value(-1, 5, 2, 60);
  const mpq_class x0 = mpq_class(1, 10);
  const TorusPoint tx0(x0);
  const auto golden = AlphaSpec::golden();
  for (std::uint64_t N : {1u, 2u, 17u, 500u, 2000u}) {
    const double want = oracle::naive_sum(oracle::sawtooth, alpha_r, x0, N);
    EXPECT_NEAR(birkhoff_sum(Summand(JumpFunction::sawtooth()), golden, tx0, N), want, 1e-9);
    const mpq_class g(2, 7);
    const double want_ind =
        oracle::naive_sum([&](const mpq_class& x) { return oracle::indicator(x, g); }, alpha_r, x0, N);
    EXPECT_NEAR(birkhoff_sum(Summand(JumpFunction::indicator(TorusPoint(g))), golden, tx0, N),
                want_ind, 1e-9);
  }
}

TEST(Birkhoff, SmoothPartMatchesOracle) {
  const mpq_class alpha_r = oracle::surd_value(-1, 2, 1, 60);
  const auto f = JumpFunction::frac_squared();
  const double want = oracle::naive_sum(
      [](const mpq_class& x) {
        const double v = oracle::frac(x).get_d();
        return v * v - 1.0 / 3.0;
      },
      alpha_r, 0, 3000);
  EXPECT_NEAR(birkhoff_sum(Summand(f), AlphaSpec::sqrt2_minus_1(), TorusPoint(), 3000), want, 1e-9);
}

TEST(Birkhoff, CocycleIdentity) {
  const BirkhoffEngine e(Summand(JumpFunction::indicator(P("1/3"))), AlphaSpec::sqrt2_minus_1());
  const TorusPoint x0 = P("1/5");
  for (std::uint64_t N : {0u, 3u, 100u}) {
    for (std::uint64_t M : {1u, 50u, 977u}) {
      EXPECT_NEAR(e.sum(x0, N + M), e.sum(x0, N) + e.sum_range(x0, N, M), 1e-10);
    }
  }
}

TEST(Birkhoff, PrefixAndSumsAtAgree) {
  const BirkhoffEngine e(Summand(JumpFunction::sawtooth()), AlphaSpec::golden());
  const TorusPoint x0 = P("1/3");
  const auto prefix = e.prefix_sums(x0, 200000);
  const std::vector<std::uint64_t> Ns = {1, 2, 1000, 65536, 65537, 131072, 199999, 200000};
  const auto at = e.sums_at(x0, Ns);
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    EXPECT_EQ(prefix[Ns[i] - 1], at[i]) << Ns[i];
    EXPECT_EQ(e.sum(x0, Ns[i]), at[i]) << Ns[i];
  }
}

TEST(Birkhoff, WorkerCountDoesNotChangeResults) {
  const Summand fn(JumpFunction::indicator(P("2/7")));
  SumOptions one;
  one.workers = 1;
  SumOptions four;
  four.workers = 4;
  const BirkhoffEngine a(fn, AlphaSpec::golden(), one);
  const BirkhoffEngine b(fn, AlphaSpec::golden(), four);
  EXPECT_EQ(a.prefix_sums(P("1/10"), 300000), b.prefix_sums(P("1/10"), 300000));
  EXPECT_EQ(a.sum(P("0"), 1000003), b.sum(P("0"), 1000003));
}

TEST(Birkhoff, OrbitPoints) {
  const BirkhoffEngine e(Summand(JumpFunction::sawtooth()), AlphaSpec::golden());
  const auto pts = e.orbit(P("0"), 0, 5);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(pts[k], k * g - std::floor(k * g), 1e-15);
}

TEST(Birkhoff, ShiftByAlphaIsIndexShift) {
  const BirkhoffEngine e(Summand(JumpFunction::sawtooth()), AlphaSpec::sqrt2_minus_1());
  // S_N(x0 + alpha) = S_{N+1}(x0) - f(x0)
  const TorusPoint x0 = P("1/4");
  EXPECT_NEAR(e.sum_range(x0, 1, 1234), e.sum(x0, 1235) - (0.25 - 0.5), 1e-10);
}

TEST(Birkhoff, DenjoyKoksmaAlongConvergents) {
  for (const auto& f : {JumpFunction::sawtooth(), JumpFunction::indicator(P("1/3")),
                        JumpFunction::frac_squared()}) {
    const auto rows = denjoy_koksma_suite(Summand(f), AlphaSpec::golden(), P("1/10"), 18);
    ASSERT_EQ(rows.size(), 18u);
    for (const auto& r : rows) {
      EXPECT_TRUE(r.pass) << r.n;
      EXPECT_LE(r.abs_sum, r.variation + 1e-9);
    }
    const auto one = denjoy_koksma_check(Summand(f), AlphaSpec::golden(), P("1/10"), 12);
    EXPECT_EQ(one.abs_sum, rows[11].abs_sum);
  }
}

TEST(Birkhoff, GoldenSawtoothAtZero) {
  const auto rows = denjoy_koksma_suite(Summand(JumpFunction::sawtooth()), AlphaSpec::golden(), P("0"), 20);
  for (const auto& r : rows) EXPECT_TRUE(r.pass);
}

TEST(Birkhoff, BlockDecompositionIdentity) {
  const AlphaSpec alpha = AlphaSpec::from_digits({2, 1, 3, 1, 1, 40, 1, 2});
  const auto t = convergents(alpha, 6);
  const std::uint64_t q = t[5].q.get_ui();
  const Summand fn(JumpFunction::sawtooth());
  const TorusPoint x0 = P("1/9");
  const std::uint64_t N = 37 * q + 5;
  const auto d = decompose(N, 5, q);
  EXPECT_EQ(d.b, 37u);
  EXPECT_EQ(d.rem, 5u);
  double s = 0.0;
  for (std::uint64_t u = 0; u < d.b; ++u) s += block_increment(fn, alpha, x0, u, 5);
  const BirkhoffEngine e(fn, alpha);
  s += e.sum_range(x0, d.b * q, d.rem);
  EXPECT_NEAR(s, e.sum(x0, N), 1e-10);
}

TEST(Birkhoff, PartialQuotientBound) {
  const Summand fn(JumpFunction::sawtooth());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t N = rng() % 1000000;
    const auto r = partial_quotient_bound_check(fn, AlphaSpec::sqrt2_minus_1(), P("1/3"), N);
    EXPECT_TRUE(r.pass) << N;
  }
  EXPECT_TRUE(partial_quotient_bound_check(fn, AlphaSpec::golden(), P("0"), 0).pass);
}

TEST(Birkhoff, StarDiscrepancyOracle) {
  std::vector<double> pts = {0.5};
  EXPECT_DOUBLE_EQ(star_discrepancy(pts).star, 0.5);
  pts = {0.25, 0.75};
  EXPECT_DOUBLE_EQ(star_discrepancy(pts).star, 0.25);
  // brute force over a fine grid of test intervals [0, t)
  const AlphaSpec alpha = AlphaSpec::golden();
  const auto d = star_discrepancy(alpha, P("0"), 500);
  const auto orbit = BirkhoffEngine(Summand(), alpha).orbit(P("0"), 1, 500);
  double brute = 0.0;
  for (double x : orbit) {
    for (double t : {x, std::nextafter(x, 2.0)}) {
      double cnt = 0;
      for (double y : orbit) cnt += y < t;
      brute = std::max(brute, std::fabs(cnt / 500.0 - t));
    }
  }
  EXPECT_NEAR(d.star, brute, 1e-12);
  EXPECT_DOUBLE_EQ(d.interval_bound, 2 * d.star);
  try {
    star_discrepancy(alpha, P("0"), kDiscrepancyLimit + 1);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeLimit);
  }
}

TEST(Birkhoff, JumpAtOrbitPointOfRationalX0) {
  // x0 = gamma exactly: index 0 is evaluated exactly, right-continuous.
  const Summand fn(JumpFunction::indicator(P("1/3")));
  EXPECT_NEAR(birkhoff_sum(fn, AlphaSpec::golden(), P("1/3"), 1), -1.0 / 3.0, 1e-15);
}

TEST(Birkhoff, LowPrecisionLiteralRaises) {
  const AlphaSpec lit(PrecisionLiteral{"0.6180339887498948482", 60});
  const Summand fn(JumpFunction::sawtooth());
  try {
    birkhoff_sum(fn, lit, P("0"), 10000000);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecisionExhausted);
  }
}
