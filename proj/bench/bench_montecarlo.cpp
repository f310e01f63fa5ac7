// OpenMP kernels against their serial twins. Arguments: trials, workers.
#include <benchmark/benchmark.h>

#include "compevo/analysis.hpp"
#include "compevo/montecarlo.hpp"
#include "compevo/samplers.hpp"

using namespace compevo;

namespace {

mc::ProbabilityRequest request(std::uint64_t trials) {
  mc::ProbabilityRequest req;
  req.model = make_geometric(20'000, 1.0 / 141.0);
  req.property = Property::statistic(PropertyKind::CmaxGe, 2);
  req.trials = trials;
  req.seed = 1;
  return req;
}

void BM_ProbabilitySerial(benchmark::State& state) {
  const auto req = request(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mc::reference::estimate_probability(req));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ProbabilityParallel(benchmark::State& state) {
  const auto req = request(static_cast<std::uint64_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mc::estimate_probability(req, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HistogramSerial(benchmark::State& state) {
  const auto model = make_uniform(10'000, 100);
  const auto counter = [](const Composition& c) { return components(c).count(); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::reference::count_histogram(model, counter, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HistogramParallel(benchmark::State& state) {
  const auto model = make_uniform(10'000, 100);
  const auto counter = [](const Composition& c) { return components(c).count(); };
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::count_histogram(model, counter, state.range(0), 1, 0, workers));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleGeometric(benchmark::State& state) {
  const auto model = make_geometric(static_cast<std::uint64_t>(state.range(0)), 0.5);
  RngStream rng(1, 0);
  std::vector<Term> out;
  for (auto _ : state) {
    sample_geometric_into(out, model, rng);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ProbabilitySerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProbabilityParallel)->Args({2000, 1})->Args({2000, 2})->Args({2000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramParallel)->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleGeometric)->Arg(1000)->Arg(100'000);

BENCHMARK_MAIN();
