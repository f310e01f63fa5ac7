// Single-pass statistics of one composition: components (maximal nonzero
// runs), gaps (maximal zero runs), extremes, equal runs, squares, increasing
// runs, the Carlitz property and value multiplicities.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "compevo/core.hpp"

namespace compevo {

enum class RunKind { Component, Gap, EqualRun, IncreasingRun };

struct Run {
  std::size_t start = 0;   // 1-based
  std::size_t length = 0;
  Term value = 0;          // the repeated value, for equal runs only
};

struct RunReport {
  RunKind kind = RunKind::Component;
  std::vector<Run> runs;

  std::size_t count() const { return runs.size(); }
  std::size_t longest() const;
  // 0 when there are no runs.
  std::size_t shortest() const;
  std::size_t total_length() const;
};

RunReport components(const Composition& c);
RunReport gaps(const Composition& c);

// Lengths of the longest/shortest component and gap (0 when none exist) and
// the largest/smallest term.
struct Extremes {
  std::size_t cmax = 0;
  std::size_t cmin = 0;
  std::size_t gmax = 0;
  std::size_t gmin = 0;
  Term tmax = 0;
  Term tmin = 0;
};

Extremes extremes(const Composition& c);

RunReport equal_runs(const Composition& c, bool nonzero_only);
// Length of the longest run of equal terms (nonzero terms only if requested);
// 0 when nonzero_only and c = 0^n.
std::size_t longest_equal_run(const Composition& c, bool nonzero_only);

// Occurrences of k-squares (k consecutive terms equal to k), keyed by side k.
// k = 1 squares are every term equal to one; they are included only when
// include_unit is set.
std::map<Term, std::uint64_t> square_counts(const Composition& c, bool include_unit = false);
Term largest_square(const Composition& c);

std::size_t longest_increasing_run(const Composition& c);
bool is_carlitz(const Composition& c);
std::size_t max_multiplicity(const Composition& c);

}  // namespace compevo
