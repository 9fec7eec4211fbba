#include <benchmark/benchmark.h>

#include "support/reference_search.hpp"

using namespace tinytnas;

namespace {

// Loop overhead alone: mock evaluator, budget counted in builds.
void BM_MockSearch(benchmark::State& state) {
  oracle::MockWorld world;
  world.input_length = 256;
  world.seed = 5;
  SearchConfig cfg;
  cfg.limits = {100000, 1000000, 1000000};
  cfg.search_time = std::chrono::milliseconds(state.range(0));
  std::size_t records = 0;
  for (auto _ : state) {
    ManualSearchClock clock;
    oracle::MockEvaluator ev(world, clock);
    SearchEngine engine({world.input_length, 3, 4}, cfg, ev, clock);
    records = engine.run().records.size();
  }
  state.counters["records"] = static_cast<double>(records);
}
BENCHMARK(BM_MockSearch)->Arg(50)->Arg(400);

}  // namespace
