// Throughput of the three propensity routes.
#include <benchmark/benchmark.h>

#include "entprop/propensity.hpp"
#include "entprop/rng.hpp"

namespace {

entprop::EdgeProbMatrixSpec random_spec(int n, bool directed = false) {
  entprop::Rng rng(17);
  entprop::EdgeProbMatrixSpec spec;
  spec.directed = directed;
  spec.probs = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      spec.probs(i, j) = rng.next_double();
      if (!directed) spec.probs(j, i) = spec.probs(i, j);
    }
  }
  return spec;
}

void BM_ExactDegreePropensity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = random_spec(n);
  const entprop::Graph empty(n, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        entprop::exact_degree_propensity(spec, empty, entprop::NewDegree{}));
  }
}
BENCHMARK(BM_ExactDegreePropensity)->Arg(20)->Arg(100)->Arg(400);

void BM_BruteForcePropensity(benchmark::State& state) {
  const auto spec = random_spec(5);
  const entprop::Graph empty(5, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        entprop::brute_force_propensity(spec, empty, entprop::NewDegree{}));
  }
}
BENCHMARK(BM_BruteForcePropensity);

void BM_EstimateEntangled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = random_spec(n);
  const entprop::Graph empty(n, false);
  entprop::Rng rng(23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::estimate_entangled(
        spec, empty, entprop::AtLeastOne{}, 200, rng));
  }
}
BENCHMARK(BM_EstimateEntangled)->Arg(20)->Arg(100);

}  // namespace
