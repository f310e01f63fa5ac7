#include "compevo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "compevo/samplers.hpp"

namespace compevo::mc {

namespace {

RngStream trial_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  return RngStream(seed, stream).substream(trial);
}

void check_trials(std::uint64_t trials) {
  if (trials == 0) throw UsageError("trials must be >= 1");
}

ProbabilityEstimate finish_probability(const ProbabilityRequest& req, std::uint64_t successes) {
  ProbabilityEstimate out;
  out.successes = successes;
  out.result.trials = req.trials;
  out.result.seed = req.seed;
  out.result.point = static_cast<double>(successes) / static_cast<double>(req.trials);
  const Interval ci = binomial_interval(req.interval, successes, req.trials, req.confidence);
  out.result.ci_low = ci.lo;
  out.result.ci_high = ci.hi;
  return out;
}

EstimateResult finish_mean(const std::vector<double>& values, std::uint64_t seed, double confidence) {
  // Two passes in trial order; the result does not depend on threading.
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const Interval ci = normal_interval(mean, sd, values.size(), confidence);
  return EstimateResult{mean, ci.lo, ci.hi, values.size(), seed};
}

std::vector<std::uint64_t> to_histogram(const std::vector<std::uint64_t>& counts) {
  std::uint64_t top = 0;
  for (auto c : counts) top = std::max(top, c);
  std::vector<std::uint64_t> hist(top + 1, 0);
  for (auto c : counts) hist[c] += 1;
  return hist;
}

}  // namespace

bool parallel_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int resolve_workers(int requested) {
  if (requested < 0) throw UsageError("workers must be >= 0");
#ifdef _OPENMP
  return requested == 0 ? omp_get_max_threads() : requested;
#else
  return 1;
#endif
}

ProbabilityEstimate estimate_probability(const ProbabilityRequest& req, int workers) {
  check_trials(req.trials);
  const int threads = resolve_workers(workers);
  const auto trials = static_cast<std::int64_t>(req.trials);
  std::uint64_t successes = 0;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : successes)
  for (std::int64_t t = 0; t < trials; ++t) {
    RngStream rng = trial_stream(req.seed, req.stream, static_cast<std::uint64_t>(t));
    const Composition c = sample(req.model, rng);
    successes += req.property.holds(c) ? 1 : 0;
  }
  (void)threads;
  return finish_probability(req, successes);
}

EstimateResult estimate_mean(const ModelParams& model, const Statistic& statistic,
                             std::uint64_t trials, std::uint64_t seed, std::uint64_t stream,
                             double confidence, int workers) {
  check_trials(trials);
  const int threads = resolve_workers(workers);
  std::vector<double> values(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    RngStream rng = trial_stream(seed, stream, static_cast<std::uint64_t>(t));
    values[t] = statistic(sample(model, rng));
  }
  (void)threads;
  return finish_mean(values, seed, confidence);
}

std::vector<std::uint64_t> count_histogram(const ModelParams& model, const Counter& counter,
                                           std::uint64_t trials, std::uint64_t seed,
                                           std::uint64_t stream, int workers) {
  check_trials(trials);
  const int threads = resolve_workers(workers);
  std::vector<std::uint64_t> counts(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    RngStream rng = trial_stream(seed, stream, static_cast<std::uint64_t>(t));
    counts[t] = counter(sample(model, rng));
  }
  (void)threads;
  return to_histogram(counts);
}

namespace reference {

ProbabilityEstimate estimate_probability(const ProbabilityRequest& req) {
  check_trials(req.trials);
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < req.trials; ++t) {
    RngStream rng = trial_stream(req.seed, req.stream, t);
    successes += req.property.holds(sample(req.model, rng)) ? 1 : 0;
  }
  return finish_probability(req, successes);
}

EstimateResult estimate_mean(const ModelParams& model, const Statistic& statistic,
                             std::uint64_t trials, std::uint64_t seed, std::uint64_t stream,
                             double confidence) {
  check_trials(trials);
  std::vector<double> values;
  values.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = trial_stream(seed, stream, t);
    values.push_back(statistic(sample(model, rng)));
  }
  return finish_mean(values, seed, confidence);
}

std::vector<std::uint64_t> count_histogram(const ModelParams& model, const Counter& counter,
                                           std::uint64_t trials, std::uint64_t seed,
                                           std::uint64_t stream) {
  check_trials(trials);
  std::vector<std::uint64_t> counts;
  counts.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = trial_stream(seed, stream, t);
    counts.push_back(counter(sample(model, rng)));
  }
  return to_histogram(counts);
}

}  // namespace reference

}  // namespace compevo::mc
