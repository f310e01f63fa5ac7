#include "compevo/analysis.hpp"

#include <algorithm>

namespace compevo {

namespace {

template <typename Pred>
RunReport runs_where(const Composition& c, RunKind kind, Pred pred) {
  RunReport report{kind, {}};
  const auto terms = c.terms();
  std::size_t i = 0;
  while (i < terms.size()) {
    if (!pred(terms[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < terms.size() && pred(terms[j])) ++j;
    report.runs.push_back(Run{i + 1, j - i, 0});
    i = j;
  }
  return report;
}

}  // namespace

std::size_t RunReport::longest() const {
  std::size_t best = 0;
  for (const auto& r : runs) best = std::max(best, r.length);
  return best;
}

std::size_t RunReport::shortest() const {
  if (runs.empty()) return 0;
  std::size_t best = runs.front().length;
  for (const auto& r : runs) best = std::min(best, r.length);
  return best;
}

std::size_t RunReport::total_length() const {
  std::size_t total = 0;
  for (const auto& r : runs) total += r.length;
  return total;
}

RunReport components(const Composition& c) {
  return runs_where(c, RunKind::Component, [](Term t) { return t != 0; });
}

RunReport gaps(const Composition& c) {
  return runs_where(c, RunKind::Gap, [](Term t) { return t == 0; });
}

Extremes extremes(const Composition& c) {
  Extremes e;
  const auto terms = c.terms();
  e.tmax = *std::max_element(terms.begin(), terms.end());
  e.tmin = *std::min_element(terms.begin(), terms.end());
  // One pass over maximal zero / nonzero runs.
  std::size_t i = 0;
  while (i < terms.size()) {
    const bool zero = terms[i] == 0;
    std::size_t j = i;
    while (j < terms.size() && (terms[j] == 0) == zero) ++j;
    const std::size_t len = j - i;
    auto& longest = zero ? e.gmax : e.cmax;
    auto& shortest = zero ? e.gmin : e.cmin;
    longest = std::max(longest, len);
    shortest = shortest == 0 ? len : std::min(shortest, len);
    i = j;
  }
  return e;
}

RunReport equal_runs(const Composition& c, bool nonzero_only) {
  RunReport report{RunKind::EqualRun, {}};
  const auto terms = c.terms();
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if (!(nonzero_only && terms[i] == 0)) report.runs.push_back(Run{i + 1, j - i, terms[i]});
    i = j;
  }
  return report;
}

std::size_t longest_equal_run(const Composition& c, bool nonzero_only) {
  return equal_runs(c, nonzero_only).longest();
}

std::map<Term, std::uint64_t> square_counts(const Composition& c, bool include_unit) {
  // A k-square lies inside an equal run of value k; a run of length L >= k
  // holds L - k + 1 of them.
  std::map<Term, std::uint64_t> counts;
  for (const auto& run : equal_runs(c, true).runs) {
    const Term k = run.value;
    if (k == 1 && !include_unit) continue;
    if (run.length >= k) counts[k] += run.length - k + 1;
  }
  return counts;
}

Term largest_square(const Composition& c) {
  Term best = 0;
  for (const auto& run : equal_runs(c, true).runs) {
    if (run.value >= 2 && run.length >= run.value) best = std::max(best, run.value);
  }
  return best;
}

std::size_t longest_increasing_run(const Composition& c) {
  const auto terms = c.terms();
  std::size_t best = 1;
  std::size_t current = 1;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    current = terms[i] > terms[i - 1] ? current + 1 : 1;
    best = std::max(best, current);
  }
  return best;
}

bool is_carlitz(const Composition& c) {
  const auto terms = c.terms();
  return std::adjacent_find(terms.begin(), terms.end()) == terms.end();
}

std::size_t max_multiplicity(const Composition& c) {
  std::vector<Term> sorted(c.terms().begin(), c.terms().end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t best = 1;
  std::size_t current = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    current = sorted[i] == sorted[i - 1] ? current + 1 : 1;
    best = std::max(best, current);
  }
  return best;
}

}  // namespace compevo
