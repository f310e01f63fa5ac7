// Confidence intervals and goodness-of-fit tests for Monte Carlo checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace compevo {

enum class IntervalKind { Wilson, ClopperPearson };

IntervalKind parse_interval_kind(const std::string& text);
std::string to_string(IntervalKind kind);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Two-sided standard normal quantile for the given confidence, e.g. 1.96
// for 0.95.
double z_value(double confidence);

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);
Interval clopper_pearson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);
Interval binomial_interval(IntervalKind kind, std::uint64_t successes, std::uint64_t trials,
                           double confidence);
// mean +- z * sd / sqrt(trials)
Interval normal_interval(double mean, double sd, std::uint64_t trials, double confidence);

struct ChiSquareResult {
  double statistic = 0.0;
  std::uint64_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;  // after merging
};

// Observed counts against expected probabilities (summing to 1). Adjacent
// bins are merged until each expected count is at least min_expected.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& probabilities, double min_expected = 5.0);

// Homogeneity test for two samples over the same bins; bins with a small
// pooled count are merged.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b, double min_expected = 5.0);

double chi_square_survival(double statistic, double dof);

double poisson_pmf(std::uint64_t k, double mean);
// Total variation distance between the empirical law of a histogram
// (histogram[x] = number of samples equal to x) and Poisson(mean).
double total_variation_to_poisson(const std::vector<std::uint64_t>& histogram, double mean);

}  // namespace compevo
