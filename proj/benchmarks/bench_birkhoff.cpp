#include <benchmark/benchmark.h>

#include "rotlab/birkhoff.hpp"
#include "rotlab/temporal.hpp"

using namespace rotlab;

static void BM_SawtoothSum(benchmark::State& state) {
  const BirkhoffEngine e(Summand(JumpFunction::sawtooth()), AlphaSpec::golden(), {0, 1});
  const auto N = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(e.sum(TorusPoint(), N));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SawtoothSum)->RangeMultiplier(10)->Range(1000, 10000000);

static void BM_IndicatorPrefix(benchmark::State& state) {
  const BirkhoffEngine e(Summand(JumpFunction::indicator(TorusPoint::parse("1/3"))),
                         AlphaSpec::sqrt2_minus_1(), {0, 1});
  const auto M = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(e.prefix_sums(TorusPoint(), M).back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndicatorPrefix)->RangeMultiplier(10)->Range(1000, 1000000);

static void BM_WideFixedPoint(benchmark::State& state) {
  SumOptions opt{static_cast<unsigned>(state.range(0)), 1};
  const BirkhoffEngine e(Summand(JumpFunction::frac_squared()), AlphaSpec::golden(), opt);
  for (auto _ : state) benchmark::DoNotOptimize(e.sum(TorusPoint(), 100000));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_WideFixedPoint)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);

static void BM_Convergents(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(convergents(AlphaSpec::sqrt2_minus_1(), state.range(0)));
}
BENCHMARK(BM_Convergents)->Arg(30)->Arg(300);

static void BM_KsEcdfVsLaw(benchmark::State& state) {
  LimitLawParams p;
  p.H = {1.0};
  p.gamma_bar = {0.0};
  const GLaw law(p);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = (i + 0.5) / v.size();
    v[i] = y * y / 2 - y / 2;
  }
  const EmpiricalCDF F(v);
  for (auto _ : state) benchmark::DoNotOptimize(ks_distance(F, law));
}
BENCHMARK(BM_KsEcdfVsLaw)->Arg(10000)->Arg(1000000);

BENCHMARK_MAIN();
