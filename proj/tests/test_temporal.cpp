#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotlab/error.hpp"
#include "rotlab/temporal.hpp"

using namespace rotlab;

namespace {

EmpiricalCDF sample(std::uint64_t seed, std::size_t n, double scale = 1.0, double shift = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(shift, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return EmpiricalCDF(std::move(v));
}

// Brute-force sup distance between two step functions.
double ks_brute(const EmpiricalCDF& F, const EmpiricalCDF& G) {
  double best = 0.0;
  for (const auto* s : {&F, &G}) {
    for (double x : s->values()) {
      best = std::max(best, std::fabs(F.cdf(x) - G.cdf(x)));
      best = std::max(best, std::fabs(F.cdf_left(x) - G.cdf_left(x)));
    }
  }
  return best;
}

LimitLawParams sawtooth_law() {
  LimitLawParams p;
  p.H = {1.0};
  p.gamma_bar = {0.0};
  return p;
}

}  // namespace

TEST(Ecdf, Basics) {
  const EmpiricalCDF F({3.0, 1.0, 2.0, 2.0});
  EXPECT_DOUBLE_EQ(F.cdf(2.0), 0.75);
  EXPECT_DOUBLE_EQ(F.cdf_left(2.0), 0.25);
  EXPECT_DOUBLE_EQ(F.quantile(0.5), 2.0);
  EXPECT_DOUBLE_EQ(F.quantile(0.25), 1.0);
  EXPECT_DOUBLE_EQ(F.quantile(1.0), 3.0);
  EXPECT_THROW(EmpiricalCDF({std::nan("")}), LabError);
  const auto M = EmpiricalCDF::merge(F, EmpiricalCDF({0.0}));
  EXPECT_EQ(M.size(), 5u);
  EXPECT_DOUBLE_EQ(M.values().front(), 0.0);
}

TEST(Ecdf, StandardizationIsAffineInvariant) {
  const auto F = sample(1, 1001);
  const auto G = F.affine(4.0, -7.0);
  const auto a = F.standardized();
  const auto b = G.standardized();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-12);
  EXPECT_THROW(EmpiricalCDF({1.0, 1.0, 1.0}).standardized(), LabError);
}

TEST(Ks, MetricProperties) {
  std::vector<EmpiricalCDF> fam = {sample(1, 300), sample(2, 500, 2.0), sample(3, 200, 1.0, 0.5),
                                   EmpiricalCDF({0.0, 0.0, 1.0})};
  for (const auto& F : fam) EXPECT_EQ(ks_distance(F, F), 0.0);
  for (const auto& F : fam) {
    for (const auto& G : fam) {
      const double d = ks_distance(F, G);
      EXPECT_EQ(d, ks_distance(G, F));
      EXPECT_NEAR(d, ks_brute(F, G), 1e-15);
      for (const auto& H : fam) EXPECT_LE(d, ks_distance(F, H) + ks_distance(H, G) + 1e-15);
    }
  }
}

TEST(Ks, PointMassAgainstUniform) {
  const UniformLaw u(0.0, 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalCDF({0.0}), u), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(u, u), 0.0);
}

TEST(Ks, UniformSampleIsClose) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> v(1000000);
  for (auto& x : v) x = U(rng);
  EXPECT_LE(ks_distance(EmpiricalCDF(std::move(v)), UniformLaw(0.0, 1.0)), 0.002);
}

TEST(Ks, LawAgainstLaw) {
  EXPECT_NEAR(ks_distance(UniformLaw(0.0, 1.0), UniformLaw(0.5, 1.5)), 0.5, 1e-6);
  const GLaw a(sawtooth_law());
  EXPECT_EQ(ks_distance(a, a), 0.0);
  // Law vs its own fine ECDF
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) {
    const double y = (i + 0.5) / 100000.0;
    v.push_back(y * y / 2 - y / 2);
  }
  EXPECT_LT(ks_distance(EmpiricalCDF(v), a), 1e-4);
}

TEST(Temporal, SubsequenceM) {
  EXPECT_EQ(subsequence_M(Rational(1), 10, 7).M, 76u);
  EXPECT_EQ(subsequence_M(Rational(7, 20), 10000, 89).M, 3500u * 89 + 88);
  EXPECT_EQ(subsequence_M(Rational(1, 100000), 10000, 89).M, 88u);
  EXPECT_THROW(subsequence_M(Rational(0), 10, 7), LabError);
  const auto s = subsequence_M(1.0, 5, AlphaSpec::golden());
  EXPECT_EQ(s.q_n, 8u);
  EXPECT_EQ(s.a_next, 1u);
  EXPECT_EQ(s.M, 15u);
}

TEST(Temporal, NormalizationRules) {
  const auto t = convergents(AlphaSpec::golden(), 20);
  const auto n = Normalization::paper_tilde(t, 100);
  EXPECT_EQ(n.n, 10u);  // q_10 = 89 <= 100 < 144
  EXPECT_DOUBLE_EQ(n.B, 100.0 / 89.0);
  const auto a = Normalization::paper_tilde_anchored(t, 8, 100);
  EXPECT_DOUBLE_EQ(a.B, 100.0 / 34.0);
  EXPECT_EQ(parse_normalization_rule(to_string(NormalizationRule::kPaperTilde)),
            NormalizationRule::kPaperTilde);
  EXPECT_THROW(parse_normalization_rule("nope"), LabError);
  EXPECT_THROW(Normalization::explicit_values(0.0, 0.0), LabError);
}

TEST(Temporal, EcdfMatchesPrefixSums) {
  const Summand fn(JumpFunction::sawtooth());
  const auto pre = BirkhoffEngine(fn, AlphaSpec::golden()).prefix_sums(TorusPoint(), 5000);
  const auto F = temporal_ecdf(fn, AlphaSpec::golden(), TorusPoint(), 5000,
                               Normalization::explicit_values(1.0, 2.0));
  std::vector<double> v;
  for (double s : pre) v.push_back((s - 1.0) / 2.0);
  EXPECT_EQ(ks_distance(F, EmpiricalCDF(v)), 0.0);
}

TEST(Isolated, RationalBeta) {
  const auto r = isolated_multipliers({TorusPoint::parse("1/3")}, 0.1, 30);
  EXPECT_EQ(r.members.size(), 20u);
  for (auto N : r.members) EXPECT_NE(N % 3, 0u);
  EXPECT_NEAR(r.density, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(r.empty);
  EXPECT_EQ(r.rational_modulus, 3u);
}

TEST(Isolated, DeltaAboveHalfIsEmpty) {
  const auto r = isolated_multipliers({TorusPoint::parse("1/3")}, 0.5, 100);
  EXPECT_TRUE(r.empty);
  EXPECT_TRUE(r.members.empty());
}

TEST(Isolated, IrrationalMatchesBruteForce) {
  const mpq_class beta = oracle::surd_value(-1, 2, 1, 40);
  const auto r = isolated_multipliers({TorusPoint(beta)}, 0.1, 10000);
  std::size_t count = 0;
  for (std::uint64_t N = 1; N <= 10000; ++N) {
    if (oracle::torus_norm(oracle::frac(mpq_class(N) * beta).get_d()) > 0.1) ++count;
  }
  EXPECT_EQ(r.members.size(), count);
  EXPECT_NEAR(r.density, 0.8, 0.05);
}

TEST(Isolated, MixedBetasAndDefaultDelta) {
  const auto r = isolated_multipliers({TorusPoint::parse("1/4"), TorusPoint::parse("0.7071067811865475")},
                                      std::nullopt, 2000);
  EXPECT_DOUBLE_EQ(r.delta, 1.0 / 8.0);
  for (auto N : r.members) {
    EXPECT_GT(oracle::torus_norm(N / 4.0), 0.125);
    EXPECT_GT(oracle::torus_norm(N * 0.7071067811865475), 0.125 - 1e-12);
  }
  EXPECT_GT(r.lower_density, 0.0);
}

TEST(Refutation, ControlIsZero) {
  const auto r = tdlt_refutation(sawtooth_law(), 0.7, 0.7);
  EXPECT_EQ(r.ks_standardized, 0.0);
  EXPECT_EQ(r.verdict, "same");
}

TEST(Refutation, SymmetricSawtoothHalfVsOneIsSame) {
  // g(y) = y^2/2 - y/2 is symmetric about 1/2, so g(U_1) and g(U_1/2)
  // have identical laws.
  const auto r = tdlt_refutation(sawtooth_law(), 0.5, 1.0);
  EXPECT_LT(r.ks_standardized, 1e-9);
  EXPECT_EQ(r.verdict, "same");
}

TEST(Refutation, AutomaticPairIsDistinct) {
  const auto r = tdlt_refutation(sawtooth_law(), std::nullopt, std::nullopt);
  EXPECT_TRUE(r.automatic);
  EXPECT_NEAR(r.eps, 0.5, 1e-9);
  EXPECT_GT(r.delta, r.eps);
  EXPECT_GT(r.ks_standardized, kDistinctThreshold);
  EXPECT_EQ(r.verdict, "distinct");
  EXPECT_THROW(tdlt_refutation(sawtooth_law(), 0.5, std::nullopt), LabError);
}

TEST(Refutation, CriticalPairGeometry) {
  LimitLawParams p;
  p.H = {1.0, -0.6};
  p.gamma_bar = {0.1, 0.45};
  p.x0_bar = 0.2;
  const auto g = g_closed_form(p);
  const auto cp = critical_pair(g);
  const double s = cp.flipped ? -1.0 : 1.0;
  EXPECT_GT(cp.delta, cp.eps);
  // rises on [0, eps], falls on [eps, delta], ends between 0 and g(eps)
  for (int i = 1; i < 100; ++i) {
    const double y = cp.eps * i / 100.0;
    EXPECT_LE(s * g(y), s * g(cp.eps) + 1e-12);
  }
  EXPECT_GE(s * g(cp.delta), -1e-12);
  EXPECT_LT(s * g(cp.delta), s * g(cp.eps));
}
