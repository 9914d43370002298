#include <benchmark/benchmark.h>

#include "ppboot/bootstrap.hpp"
#include "ppboot/intensity.hpp"
#include "ppboot/moments.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/two_point.hpp"

using namespace ppboot;

namespace {

const Window2 unit = Window2::unit_square();

PointPattern2 pattern_of_size(std::int64_t n) {
  return simulate_homogeneous_poisson(static_cast<double>(n), unit, {1, 0});
}

// Cubic reference loop for the triple sum, to show what the quadratic path saves.
double triple_sum_cubic(const PairTable& t) {
  const std::size_t n = t.size();
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (i != j && j != k && i != k) s += t.at(i, j) * t.at(i, k);
  return s;
}

}  // namespace

static void BM_DistinctIndexSums(benchmark::State& state) {
  const auto pat = pattern_of_size(state.range(0));
  const auto f = parse_pair_function("disk:0.1", unit);
  for (auto _ : state) benchmark::DoNotOptimize(distinct_index_sums(pat, f));
  state.SetComplexityN(static_cast<std::int64_t>(pat.size()));
}
BENCHMARK(BM_DistinctIndexSums)->RangeMultiplier(2)->Range(32, 1024)->Complexity();

static void BM_TripleSumCubic(benchmark::State& state) {
  const PairTable table(pattern_of_size(state.range(0)), parse_pair_function("disk:0.1", unit));
  for (auto _ : state) benchmark::DoNotOptimize(triple_sum_cubic(table));
  state.SetComplexityN(static_cast<std::int64_t>(table.size()));
}
BENCHMARK(BM_TripleSumCubic)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_BootstrapVariance(benchmark::State& state) {
  const auto pat = pattern_of_size(100);
  const auto f = parse_pair_function("pcf:r=0.1,b=0.02,kernel=box", unit);
  const auto scheme = state.range(1) == 0 ? ResampleScheme::multinomial : ResampleScheme::poissonized;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_variance(pat, f, static_cast<std::size_t>(state.range(0)), scheme, {2, 0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BootstrapVariance)->Args({10000, 0})->Args({10000, 1});

static void BM_MomentsQuadrature(benchmark::State& state) {
  const auto f = parse_pair_function("pcf:r=0.05,b=0.01,kernel=box", unit);
  const auto spec = IntegrationSpec::quadrature(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(s_moments_poisson(100.0, unit, f, spec));
}
BENCHMARK(BM_MomentsQuadrature)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MomentsMonteCarlo(benchmark::State& state) {
  const auto f = parse_pair_function("pcf:r=0.05,b=0.01,kernel=box", unit);
  const auto spec = IntegrationSpec::monte_carlo(static_cast<std::size_t>(state.range(0)), {3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(s_moments_poisson(100.0, unit, f, spec));
}
BENCHMARK(BM_MomentsMonteCarlo)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

static void BM_TStarClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(t_star_closed_form({state.range(0), 0.05, 0.05}));
}
BENCHMARK(BM_TStarClosedForm)->Arg(4)->Arg(50)->Arg(400);

static void BM_TStarMonteCarlo(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(t_star_monte_carlo(state.range(0), 0.05, 0.05, 10000, {4, 0}));
  }
}
BENCHMARK(BM_TStarMonteCarlo)->Arg(4)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
