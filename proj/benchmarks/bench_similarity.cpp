// Assignment solving and the smoothed logistic curve.
#include <benchmark/benchmark.h>

#include "entprop/assignment.hpp"
#include "entprop/rng.hpp"
#include "entprop/similarity.hpp"

namespace {

void BM_MaxAssignment(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  entprop::Rng rng(43);
  Eigen::MatrixXd score(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) score(i, j) = rng.next_double();
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::solve_max_assignment(score));
  }
}
BENCHMARK(BM_MaxAssignment)->Arg(5)->Arg(10)->Arg(64);

void BM_RFunction(benchmark::State& state) {
  double a = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::r_function(a, 1.0));
    a += 1e-9;
  }
}
BENCHMARK(BM_RFunction);

}  // namespace
