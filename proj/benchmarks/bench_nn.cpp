#include <benchmark/benchmark.h>

#include "tinytnas/data.hpp"
#include "tinytnas/nn.hpp"
#include "tinytnas/profiler.hpp"

using namespace tinytnas;

// Batches of 16 windows, L=64, C=3.

namespace {

void BM_Forward(benchmark::State& state) {
  const auto spec = build_arch_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                                    {64, 3, 3});
  const auto params = init_params<float>(spec, 1);
  const std::vector<float> x(16 * 64 * 3, 0.25f);
  for (auto _ : state) benchmark::DoNotOptimize(forward(spec, params, std::span<const float>(x)));
  state.counters["MACs"] = static_cast<double>(mac_of(spec));
}
BENCHMARK(BM_Forward)->Args({4, 2})->Args({16, 3})->Args({64, 0});

void BM_Backward(benchmark::State& state) {
  const auto spec = build_arch_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                                    {64, 3, 3});
  const auto params = init_params<float>(spec, 1);
  const std::vector<float> x(16 * 64 * 3, 0.25f);
  const std::vector<int> labels(16, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        backward(spec, params, std::span<const float>(x), std::span<const int>(labels)));
}
BENCHMARK(BM_Backward)->Args({4, 2})->Args({16, 3})->Args({64, 0});

void BM_CandidateTraining(benchmark::State& state) {
  SyntheticWaveformOptions opts;
  opts.windows = 300;
  const auto ds = normalize_zscore(split_stratified(make_synthetic_waveforms(opts), 0.2, 1));
  const auto spec = build_arch_spec(4, 2, ds.meta);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_candidate(spec, ds, cfg));
}
BENCHMARK(BM_CandidateTraining)->Unit(benchmark::kMillisecond);

}  // namespace
