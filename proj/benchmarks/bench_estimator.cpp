#include <benchmark/benchmark.h>

#include "ellest/estimator.hpp"
#include "ellest/models.hpp"

namespace {

using namespace ellest;

// Score table construction for a Gaussian location grid.
void BM_ScoreTableTv(benchmark::State& state) {
  const auto m = static_cast<double>(state.range(0));
  const Model model = gaussian_location_grid(1, -1.0, 1.0, 2.0 / (m - 1.0));
  for (auto _ : state) {
    ScoreTable table(model, LossSpec::tv());
    benchmark::DoNotOptimize(table.size());
  }
}
BENCHMARK(BM_ScoreTableTv)->Arg(11)->Arg(41);

// One estimate with a prebuilt table, TV interval counting path.
void BM_EstimateTv(benchmark::State& state) {
  const Model model = gaussian_location_grid(1, -1.0, 1.0, 0.02);
  const ScoreTable table(model, LossSpec::tv());
  const Sample x = sample_from(Measure::gaussian(0.1), static_cast<std::size_t>(state.range(0)), 7);
  EstimatorOptions opts;
  opts.keep_matrix = false;
  for (auto _ : state) benchmark::DoNotOptimize(ell_estimate(x, table, opts).chosen);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EstimateTv)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();

// Hellinger on a translation grid goes through the density table.
void BM_EstimateHellinger(benchmark::State& state) {
  const Model model = translation_grid(TranslationBase::kCauchy, -1.0, 1.0, 0.1);
  const ScoreTable table(model, LossSpec::hellinger());
  const Sample x = sample_from(Measure::cauchy(0.05), static_cast<std::size_t>(state.range(0)), 11);
  EstimatorOptions opts;
  opts.keep_matrix = false;
  for (auto _ : state) benchmark::DoNotOptimize(ell_estimate(x, table, opts).chosen);
}
BENCHMARK(BM_EstimateHellinger)->Arg(200)->Arg(2000);

// Wasserstein over a histogram net (prefix-sum path).
void BM_EstimateWasserstein(benchmark::State& state) {
  const Model model = histogram_net(4, {0.5, 1.0, 1.5});
  const ScoreTable table(model, LossSpec::wasserstein());
  const Sample x = sample_from(Measure::uniform(0.0, 1.0), static_cast<std::size_t>(state.range(0)), 3);
  EstimatorOptions opts;
  opts.keep_matrix = false;
  for (auto _ : state) benchmark::DoNotOptimize(ell_estimate(x, table, opts).chosen);
}
BENCHMARK(BM_EstimateWasserstein)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
