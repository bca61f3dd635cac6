#include <benchmark/benchmark.h>

#include <vector>

#include "confclust/geometry.hpp"
#include "confclust/gmm.hpp"
#include "confclust/kmeans.hpp"

using namespace confclust;

namespace {

Dataset blobs(std::size_t per_blob) {
  std::vector<Vector> centers;
  for (double x : {0.0, 8.0})
    for (double y : {0.0, 8.0}) {
      Vector c(2);
      c << x, y;
      centers.push_back(c);
    }
  Vector lo(2), hi(2);
  lo << -5, -5;
  hi << 13, 13;
  return gen_blobs(centers, per_blob, 1.0, per_blob / 5, Box{lo, hi}, 42);
}

void BM_Lloyd(benchmark::State& state) {
  const Dataset data = blobs(static_cast<std::size_t>(state.range(0)));
  FitOptions opts;
  opts.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lloyd(data, 4, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.n()));
}
BENCHMARK(BM_Lloyd)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EstimateVolume(benchmark::State& state) {
  const Dataset data = blobs(200);
  const SplitPair split = split_half(data, 1);
  FitOptions opts;
  opts.restarts = 1;
  const SphereModel model = lloyd(split.fit_half, static_cast<std::size_t>(state.range(1)), opts);
  const PredictionSet set = k_spheres(model, split.calib_half, 0.1, false);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_volume(set, n, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateVolume)->Args({10000, 4})->Args({100000, 4})->Args({100000, 20});

void BM_EmFit(benchmark::State& state) {
  const Dataset data = blobs(static_cast<std::size_t>(state.range(0)));
  FitOptions opts;
  opts.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(em_fit(data, 4, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.n()));
}
BENCHMARK(BM_EmFit)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
