// IRLS fitting cost at simulation-relevant sizes.
#include <benchmark/benchmark.h>

#include "entprop/glm.hpp"
#include "entprop/rng.hpp"

namespace {

void BM_FitLogistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  entprop::Rng rng(41);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd design(n, 2);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = rng.normal();
    y[i] = rng.bernoulli(entprop::expit(0.3 + 0.9 * design(i, 1))) ? 1.0 : 0.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::fit_logistic(y, design));
  }
}
BENCHMARK(BM_FitLogistic)->Arg(100)->Arg(10000);

}  // namespace
