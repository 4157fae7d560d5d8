// Node-effect model fitting and graph sampling.
#include <benchmark/benchmark.h>

#include "entprop/netmodel.hpp"
#include "entprop/rng.hpp"

namespace {

void BM_FitNodeEffectModel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  entprop::Rng rng(31);
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = i == j ? 0.0 : rng.normal();
  entprop::NodeEffectFitSpec gen;
  gen.intercept = -2.0;
  gen.node_effects = Eigen::VectorXd::Zero(n);
  gen.slope = 1.0;
  gen.dyadic_covariates = x;
  gen.directed = true;
  const entprop::Graph g_plus =
      entprop::sample_posttreatment(gen, entprop::Graph(n, true), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::fit_node_effect_model(g_plus, x, true, 0.1));
  }
}
BENCHMARK(BM_FitNodeEffectModel)->Arg(50)->Arg(100);

void BM_SamplePosttreatment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  entprop::Rng rng(37);
  entprop::EdgeProbMatrixSpec spec;
  spec.directed = false;
  spec.probs = Eigen::MatrixXd::Constant(n, n, 0.05);
  const entprop::Graph empty(n, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entprop::sample_posttreatment(spec, empty, rng));
  }
}
BENCHMARK(BM_SamplePosttreatment)->Arg(100)->Arg(500);

}  // namespace
