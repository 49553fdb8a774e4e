#include <benchmark/benchmark.h>

#include "sidelink/engine.hpp"

namespace {

void BM_RunDrop(benchmark::State& state) {
  sidelink::engine::SimConfig config;
  config.scenario.ivd_m = static_cast<double>(state.range(0));
  const auto table = config.mcs_table();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sidelink::engine::run_drop(config, seed++, table));
  state.SetLabel(std::to_string(sidelink::geometry::expected_vehicle_count(config.scenario)) + " UEs");
}
BENCHMARK(BM_RunDrop)->Arg(100)->Arg(20)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
