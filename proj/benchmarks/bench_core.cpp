#include <random>

#include <benchmark/benchmark.h>

#include "lstcn/data.hpp"
#include "lstcn/linalg.hpp"
#include "lstcn/model.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace lstcn;

void BM_RidgeSolve(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::mt19937_64 rng(1);
  const Matrix phi = testing::random_matrix(1024, n + 1, rng);
  const Matrix y = testing::random_matrix(1024, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ridge_solve(phi, y, 0.01));
}
BENCHMARK(BM_RidgeSolve)->Arg(24)->Arg(48)->Arg(288)->Unit(benchmark::kMicrosecond);

void BM_TrainOnPatch(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::mt19937_64 rng(2);
  const TimePatch patch{testing::random_matrix(1024, n, rng, 0.0, 1.0),
                        testing::random_matrix(1024, n, rng, 0.0, 1.0), 0};
  const LstcnModel model(Priors{testing::random_matrix(n, n, rng), testing::random_matrix(1, n, rng)}, {});
  for (auto _ : state) benchmark::DoNotOptimize(train_on_patch(model, patch));
}
BENCHMARK(BM_TrainOnPatch)->Arg(24)->Arg(48)->Arg(288)->Unit(benchmark::kMicrosecond);

void BM_MakeWindows(benchmark::State& state) {
  testing::SinusoidSpec spec;
  spec.variables = 8;
  spec.length = state.range(0);
  const TimeSeries series = testing::sinusoid_series(spec);
  for (auto _ : state) benchmark::DoNotOptimize(make_windows(series, 6, 6, 1));
  state.SetItemsProcessed(state.iterations() * spec.length);
}
BENCHMARK(BM_MakeWindows)->Arg(10'000)->Arg(200'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
