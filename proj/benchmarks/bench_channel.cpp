#include <benchmark/benchmark.h>

#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/linkbudget.hpp"

namespace {

void BM_PathlossLos(benchmark::State& state) {
  double d = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sidelink::channel::pathloss_los(d, 1.5, 1.5, 5.9e9));
    d = d > 1000.0 ? 10.0 : d + 1.0;
  }
}
BENCHMARK(BM_PathlossLos);

void BM_Sinr(benchmark::State& state) {
  std::vector<double> interferers(static_cast<std::size_t>(state.range(0)), -100.0);
  for (auto _ : state) benchmark::DoNotOptimize(sidelink::linkbudget::sinr(-80.0, interferers, -95.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sinr)->Range(1, 64)->Complexity();

}  // namespace
