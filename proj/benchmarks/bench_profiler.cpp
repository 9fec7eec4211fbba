#include <benchmark/benchmark.h>

#include "tinytnas/profiler.hpp"

using namespace tinytnas;

namespace {

void BM_BuildAndProfile(benchmark::State& state) {
  const InputShape har{128, 9, 6};
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (int c = 0; c <= compute_c_max(har.length); ++c)
      benchmark::DoNotOptimize(profile(build_arch_spec(k, c, har)));
  }
}
BENCHMARK(BM_BuildAndProfile)->Arg(4)->Arg(64)->Arg(512);

}  // namespace
