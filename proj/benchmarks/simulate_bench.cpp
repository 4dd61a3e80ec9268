#include <cstdint>

#include <benchmark/benchmark.h>

#include "common.hpp"
#include "sdlab/markov.hpp"

namespace {

using sdlab::bench::lab;

void BM_SampleState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sdlab::ChainSampler sampler(lab().generator(n));
  const auto init = sdlab::point_mass(sampler.size(), 1);
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample_state(init, 0.01, 20240607, k++));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleState)->DenseRange(1, 5);

void BM_SimulateTrajectory(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sdlab::ChainSampler sampler(lab().generator(n));
  const auto init = sdlab::point_mass(sampler.size(), 1);
  std::uint64_t k = 0;
  for (auto _ : state) {
    auto path = sampler.simulate(init, 0.01, 20240607, k++);
    benchmark::DoNotOptimize(path.states.data());
  }
}
BENCHMARK(BM_SimulateTrajectory)->DenseRange(1, 5);

}  // namespace
