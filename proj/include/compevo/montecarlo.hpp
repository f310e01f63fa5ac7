// Monte Carlo estimation kernels.
//
// Trial t of an estimate draws from RngStream(seed, stream).substream(t), so
// the sample set, and therefore every integer tally, does not depend on how
// trials are split across threads. Real-valued sums are accumulated per
// trial and reduced in trial order, which keeps them bitwise stable too.
//
// compevo::mc holds the OpenMP kernels; compevo::mc::reference holds serial
// twins with the same contract, used by tests and the benchmark.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/properties.hpp"
#include "compevo/rng.hpp"
#include "compevo/stats.hpp"

namespace compevo::mc {

// Number of OpenMP threads for `requested` workers; 0 means all available.
int resolve_workers(int requested);
bool parallel_enabled();

struct ProbabilityRequest {
  ModelParams model;
  Property property;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double confidence = 0.95;
  IntervalKind interval = IntervalKind::Wilson;
};

struct ProbabilityEstimate {
  EstimateResult result;
  std::uint64_t successes = 0;
};

using Statistic = std::function<double(const Composition&)>;
using Counter = std::function<std::uint64_t(const Composition&)>;

ProbabilityEstimate estimate_probability(const ProbabilityRequest& request, int workers = 0);

// Mean of a real statistic with a normal interval.
EstimateResult estimate_mean(const ModelParams& model, const Statistic& statistic,
                             std::uint64_t trials, std::uint64_t seed, std::uint64_t stream = 0,
                             double confidence = 0.95, int workers = 0);

// histogram[x] = number of trials whose counter returned x.
std::vector<std::uint64_t> count_histogram(const ModelParams& model, const Counter& counter,
                                           std::uint64_t trials, std::uint64_t seed,
                                           std::uint64_t stream = 0, int workers = 0);

namespace reference {

ProbabilityEstimate estimate_probability(const ProbabilityRequest& request);
EstimateResult estimate_mean(const ModelParams& model, const Statistic& statistic,
                             std::uint64_t trials, std::uint64_t seed, std::uint64_t stream = 0,
                             double confidence = 0.95);
std::vector<std::uint64_t> count_histogram(const ModelParams& model, const Counter& counter,
                                           std::uint64_t trials, std::uint64_t seed,
                                           std::uint64_t stream = 0);

}  // namespace reference

}  // namespace compevo::mc
