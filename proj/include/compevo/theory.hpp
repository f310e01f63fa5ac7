// Closed-form expectations, probabilities, Poisson limits and threshold
// locations for the geometric model C(n,p) and the uniform model C(n,m).
// Everything here is a pure function of its arguments.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compevo/core.hpp"

namespace compevo {

enum class PredictionKind { Expectation, Probability, PoissonMean, ThresholdLocation };

std::string to_string(PredictionKind kind);

struct TheoryPrediction {
  double value = 0.0;
  PredictionKind kind = PredictionKind::Probability;
  std::string regime;
  // True when the formula holds at every finite n, false for limits.
  bool exact = true;
};

// Components and gaps (exact at finite n).
TheoryPrediction expected_components(std::uint64_t n, const GeometricRate& rate);
TheoryPrediction expected_gaps(std::uint64_t n, const GeometricRate& rate);
TheoryPrediction mean_component_length(std::uint64_t n, const GeometricRate& rate);
TheoryPrediction mean_gap_length(std::uint64_t n, const GeometricRate& rate);

// P(an exact consecutive pattern occurs at a given position) = q^k p^s.
TheoryPrediction prob_exact_consecutive_at_position(const PatternSpec& spec,
                                                    const GeometricRate& rate);
// (n + 1 - k) q^k p^s.
TheoryPrediction expected_exact_occurrences(std::uint64_t n, const PatternSpec& spec,
                                            const GeometricRate& rate);
// The p maximising the expected occurrence count: p/q = s/k, so p = s / (k + s).
double argmax_p_exact(const PatternSpec& spec);

// Same event under the uniform model:
// binom(m-s+n-k-1, m-s) / binom(m+n-1, m), 0 when m < s or n < k.
TheoryPrediction prob_exact_consecutive_at_position_uniform(std::uint64_t n, std::uint64_t m,
                                                            const PatternSpec& spec);

// Upper pattern at a position: p^s. Lower pattern: prod (1 - p^(r_i + 1)).
TheoryPrediction prob_upper_at_position(const PatternSpec& spec, const GeometricRate& rate);
TheoryPrediction prob_lower_at_position(const PatternSpec& spec, const GeometricRate& rate);
// k equal nonzero terms at a position: (qp)^k / (1 - p^k).
TheoryPrediction prob_equal_nonzero_run_at_position(std::uint64_t k, const GeometricRate& rate);

// Consecutive ordering pattern at a position. The probability depends only on
// the multiset of terms: prod_j q^{l_j} p^{s_{j+1}} / (1 - p^{s_j}) with
// s_j = l_j + ... + l_r.
TheoryPrediction prob_ordering_at_position(const PatternSpec& spec, const GeometricRate& rate);
TheoryPrediction prob_ordering_multiset(const std::vector<std::uint64_t>& multiplicities,
                                        const GeometricRate& rate);

// (1 - p^r)^n and (1 - q)^(r n) = p^(r n).
TheoryPrediction prob_tmax_lt(std::uint64_t n, const GeometricRate& rate, std::uint64_t r);
TheoryPrediction prob_tmin_ge(std::uint64_t n, const GeometricRate& rate, std::uint64_t r);

// Parameters for the Poisson and threshold rows. Which fields a row needs is
// listed in its description; missing ones raise UsageError.
struct TheoryParams {
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> r;
  std::optional<double> c;
  std::optional<double> p;
  std::optional<PatternSpec> pattern;
};

struct PoissonLimit {
  std::string statistic;
  std::string property;   // e.g. "cmax >= 2"
  std::string regime;     // e.g. "p ~ alpha n^(-1/2)"
  double mean = 0.0;
  double p_zero = 0.0;    // e^-mean
  double p_positive = 0.0;
  // The property is the event X = 0 (otherwise X > 0).
  bool property_is_zero_event = false;
  TheoryPrediction probability;  // limiting P(property)
};

struct StatisticInfo {
  std::string id;
  std::string needs;        // required parameters
  std::string description;
};

const std::vector<StatisticInfo>& poisson_statistics();

PoissonLimit poisson_limit(const std::string& statistic, const TheoryParams& params, double alpha);

// The model parameter at which a Poisson row is evaluated at finite n, or
// nullopt for rows parametrised by something other than p or q.
std::optional<GeometricRate> regime_rate(const std::string& statistic, const TheoryParams& params,
                                         double alpha, std::uint64_t n);

struct ThresholdLocation {
  std::string statistic;
  std::string parameter;     // "p" or "q"
  double exponent = 0.0;     // parameter* = n^exponent
  double m_exponent = 0.0;   // m* = n p*/q* ~ n^m_exponent
  std::string formula;       // e.g. "q* = n^(-1)"
  std::string m_formula;
  std::optional<double> value;    // parameter* at n, when n is given
  std::optional<double> m_value;  // m* at n, when n is given
};

const std::vector<StatisticInfo>& threshold_statistics();

ThresholdLocation threshold_location(const std::string& statistic, const TheoryParams& params,
                                     std::optional<std::uint64_t> n = std::nullopt);

// Square patterns: k*(n) = (log n / log log n)(1 + c log log log n / log log n)
// at q = theta log log n / log n, with the first- and second-moment
// quantities log E[X] and log R. Evaluation only; no finite n is in-regime.
struct SquareHeuristic {
  double k_star = 0.0;
  double q = 0.0;
  double log_expected = 0.0;
  double log_ratio = 0.0;
};

SquareHeuristic square_heuristic(std::uint64_t n, double c, double theta);
// log E[X] and log R for integer side k at rate q.
double square_log_expected(std::uint64_t n, std::uint64_t k, const GeometricRate& rate);
double square_log_ratio(std::uint64_t n, std::uint64_t k, const GeometricRate& rate);

}  // namespace compevo
