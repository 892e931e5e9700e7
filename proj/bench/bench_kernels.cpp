// Serial reference vs OpenMP kernels: trial batches and k-means labelling.

#include <benchmark/benchmark.h>

#include "fairpark/experiment.hpp"
#include "fairpark/kmeans.hpp"
#include "fairpark/rng.hpp"

using namespace fairpark;

namespace {

ExperimentConfig bench_config() {
  ExperimentConfig c;
  c.trials = 8;
  c.trial.n_drivers = 100;
  c.trial.n_lots = 10;
  return c;
}

void batch(benchmark::State& state, Execution exec) {
  const ExperimentConfig c = bench_config();
  const auto pool = load_pool(c);
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(pool, c, exec));
  state.SetItemsProcessed(state.iterations() * c.trials);
}

void BM_BatchSerial(benchmark::State& state) { batch(state, Execution::serial); }
void BM_BatchParallel(benchmark::State& state) { batch(state, Execution::parallel); }

struct LabelData {
  std::vector<Point> points;
  std::vector<Point> centroids;
  LabelData(std::size_t n, int k) {
    Rng rng(1);
    for (std::size_t i = 0; i < n; ++i) points.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
    for (int c = 0; c < k; ++c) centroids.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
  }
};

template <bool Parallel>
void BM_Label(benchmark::State& state) {
  const LabelData d(static_cast<std::size_t>(state.range(0)), 10);
  std::vector<int> labels(d.points.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      assign_clusters_parallel(d.points, d.centroids, labels);
    } else {
      assign_clusters_serial(d.points, d.centroids, labels);
    }
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_TEMPLATE(BM_Label, false)->Arg(10000)->Arg(1000000)->UseRealTime();
BENCHMARK_TEMPLATE(BM_Label, true)->Arg(10000)->Arg(1000000)->UseRealTime();

BENCHMARK_MAIN();
