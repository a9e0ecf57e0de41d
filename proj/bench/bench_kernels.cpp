#include <benchmark/benchmark.h>

#include <numeric>

#include "collarb/arbitrage.hpp"
#include "collarb/fixtures.hpp"
#include "collarb/sweep.hpp"

using namespace collarb;

namespace {

const AffineSimplexSet& fig1_set() {
  static const auto set = martingale_polytope(fixture_fig1().model, 1).set;
  return set;
}

std::vector<std::uint64_t> seeds() {
  std::vector<std::uint64_t> s(64);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

void BM_vertices_parallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vertex_enumerate(fig1_set()));
}
void BM_vertices_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vertex_enumerate_serial(fig1_set()));
}
void BM_ftap_parallel(benchmark::State& state) {
  const auto s = seeds();
  for (auto _ : state) benchmark::DoNotOptimize(ftap_sweep(s, {}));
}
void BM_ftap_serial(benchmark::State& state) {
  const auto s = seeds();
  for (auto _ : state) benchmark::DoNotOptimize(ftap_sweep_serial(s, {}));
}

}  // namespace

BENCHMARK(BM_vertices_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_vertices_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ftap_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ftap_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
