#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "common.hpp"

namespace {

using sdlab::bench::gasket;

void BM_TraceOneLevel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<sdlab::VertexId> ids(gasket().vertex_count(n - 1));
  std::iota(ids.begin(), ids.end(), sdlab::VertexId{0});
  for (auto _ : state) {
    auto t = sdlab::trace(gasket().network(n), ids);
    benchmark::DoNotOptimize(t);
  }
  state.counters["vertices"] = static_cast<double>(gasket().vertex_count(n));
}
BENCHMARK(BM_TraceOneLevel)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void BM_HarmonicExtension(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<sdlab::VertexId> v0{0, 1, 2};
  const sdlab::Vector values = sdlab::Vector::Unit(3, 0);
  for (auto _ : state) {
    auto ext = sdlab::harmonic_extension(gasket().network(n), v0, values);
    benchmark::DoNotOptimize(ext.data());
  }
}
BENCHMARK(BM_HarmonicExtension)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

void BM_BuildLevel(benchmark::State& state) {
  const auto s = sdlab::build_sierpinski_structure();
  for (auto _ : state) {
    auto c = sdlab::build_level(s, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(c.vertex_count);
  }
}
BENCHMARK(BM_BuildLevel)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

}  // namespace
