#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fastgauss/dataset.hpp"
#include "fastgauss/engine.hpp"
#include "fastgauss/series.hpp"

using namespace fastgauss;

namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void BM_FarFieldAccumulate(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto d = static_cast<std::size_t>(dim);
  const auto coords = uniform(64 * d, 1);
  const std::vector<double> w(64, 1.0);
  const std::vector<double> center(d, 0.5);
  SeriesEvaluator ev(shared_expansion_layout(dim, order));
  std::vector<double> out(ev.layout().size(order));
  for (auto _ : state) {
    ev.accumulate_far_field(coords, w, center, 0.3, order, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FarFieldAccumulate)->Args({2, 8})->Args({3, 6})->Args({5, 4});

void BM_H2L(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto d = static_cast<std::size_t>(dim);
  SeriesEvaluator ev(shared_expansion_layout(dim, order));
  const auto far = uniform(ev.layout().size(order), 2);
  const std::vector<double> a(d, 0.2), b(d, 0.8);
  std::vector<double> local(ev.layout().size(order));
  for (auto _ : state) {
    ev.h2l(far, order, a, b, 0.3, order, local);
    benchmark::DoNotOptimize(local.data());
  }
}
BENCHMARK(BM_H2L)->Args({2, 8})->Args({3, 6})->Args({5, 4});

void BM_L2L(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto d = static_cast<std::size_t>(dim);
  SeriesEvaluator ev(shared_expansion_layout(dim, order));
  const auto src = uniform(ev.layout().size(order), 3);
  const std::vector<double> a(d, 0.4), b(d, 0.45);
  std::vector<double> out(ev.layout().size(order));
  for (auto _ : state) {
    ev.l2l(src, order, a, b, 0.3, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_L2L)->Args({2, 8})->Args({3, 6})->Args({5, 4});

void BM_Engine(benchmark::State& state) {
  const auto alg = static_cast<Algorithm>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto pts = generate_points(Distribution::Clusters, 10000, dim, 4);
  KdTree tree(pts);
  RunConfig config;
  config.algorithm = alg;
  config.bandwidth = 0.05;
  if (alg == Algorithm::Dito) tree.refresh_moments(config.bandwidth, config.effective_plimit(dim));
  for (auto _ : state) {
    auto r = run_algorithm(config, tree, tree);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetLabel(algorithm_name(alg));
}
BENCHMARK(BM_Engine)
    ->ArgsProduct({{static_cast<int>(Algorithm::Dfd), static_cast<int>(Algorithm::Dfdo),
                    static_cast<int>(Algorithm::Dito)},
                   {2, 5}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
