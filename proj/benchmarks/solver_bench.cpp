#include <benchmark/benchmark.h>

#include "common.hpp"
#include "sdlab/spectral.hpp"

namespace {

using sdlab::bench::gasket;
using sdlab::bench::lab;

void BM_ResolventSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gen = lab().generator(n);
  const auto f = sdlab::coordinate_function(gasket().complex(n), 0);
  const double alpha = lab().constants().lambda + 1.0;
  for (auto _ : state) {
    auto r = sdlab::resolvent(gen, alpha, f);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.counters["vertices"] = static_cast<double>(gen.size());
}
BENCHMARK(BM_ResolventSolve)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

// Uniformization cost grows with Λt = 6·5^n t.
void BM_SemigroupApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gen = lab().generator(n);
  const auto f = sdlab::coordinate_function(gasket().complex(n), 0);
  std::size_t order = 0;
  for (auto _ : state) {
    auto r = sdlab::semigroup_apply(gen, 0.01, f);
    order = r.truncation_order;
    benchmark::DoNotOptimize(r.values.data());
  }
  state.counters["poisson_terms"] = static_cast<double>(order);
}
BENCHMARK(BM_SemigroupApply)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

}  // namespace
