// Serial reference vs OpenMP kernels for the macro-level metrics.

#include <benchmark/benchmark.h>

#include <random>

#include "asbuilt/metrics.hpp"

namespace {

using namespace asbuilt;

TriangleMesh random_mesh(std::size_t faces) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  TriangleMesh m;
  m.vertices.reserve(faces * 3);
  for (std::size_t i = 0; i < faces * 3; ++i) m.vertices.push_back({coord(rng), coord(rng), coord(rng)});
  for (std::uint32_t i = 0; i < faces; ++i) m.faces.push_back({3 * i, 3 * i + 1, 3 * i + 2});
  return m;
}

void BM_MetricsSerial(benchmark::State& state) {
  const TriangleMesh mesh = random_mesh(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::compute_macro_metrics(mesh));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MetricsParallel(benchmark::State& state) {
  const TriangleMesh mesh = random_mesh(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_macro_metrics(mesh));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// 38'703 / 251'484 / 396'800 are the face counts of the three scanned
// objects; 1M is headroom.
BENCHMARK(BM_MetricsSerial)->Arg(38703)->Arg(251484)->Arg(396800)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MetricsParallel)->Arg(38703)->Arg(251484)->Arg(396800)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
