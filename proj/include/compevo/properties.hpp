// Named composition properties used by Monte Carlo estimation, sweeps and the
// exact oracles. A property is either a statistic predicate ("cmax_ge",
// k = 2) or pattern containment, optionally negated.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/patterns.hpp"
#include "compevo/theory.hpp"

namespace compevo {

enum class PropertyKind {
  CmaxGe,         // some component has length >= k
  GmaxGe,         // some gap has length >= k
  CminGt,         // no component has length <= k
  GminGt,         // no gap has length <= k
  TmaxGe,         // some term >= r
  TminGe,         // every term >= r
  EqualRun,       // k consecutive equal nonzero terms
  EqualRunAny,    // k consecutive equal terms (k = 2: not Carlitz)
  Carlitz,        // no two adjacent terms equal
  EqualTerms,     // some value occurs at least k times
  IncreasingRun,  // k consecutive strictly increasing terms
  Square,         // k consecutive terms equal to k
  Contains,       // pattern occurrence
};

class Property {
 public:
  static Property statistic(PropertyKind kind, std::uint64_t parameter = 0);
  static Property contains(PatternSpec pattern, GapRule gap = GapRule::Adjacent);

  PropertyKind kind() const { return kind_; }
  std::uint64_t parameter() const { return parameter_; }
  const std::optional<PatternSpec>& pattern() const { return pattern_; }
  GapRule gap() const { return gap_; }
  bool negated() const { return negated_; }

  Property negate() const;

  bool holds(const Composition& c) const;
  // Occurrence count of the underlying Poisson variable: components of length
  // >= k, terms >= r, pattern occurrences, k-subsets of equal terms, and so
  // on. For X = 0 properties (cmin_gt, tmin_ge, carlitz) the count is the
  // number of violations. Negation does not change the count.
  std::uint64_t count(const Composition& c) const;

  // Stable text form, e.g. "cmax_ge(k=2)", "contains(e:[1,1])", "not carlitz".
  std::string describe() const;

 private:
  PropertyKind kind_ = PropertyKind::CmaxGe;
  std::uint64_t parameter_ = 0;
  std::optional<PatternSpec> pattern_;
  GapRule gap_ = GapRule::Adjacent;
  bool negated_ = false;
};

// Property ids accepted by make_property (and config files / the CLI).
const std::vector<std::string>& property_ids();

// id is one of property_ids(); k, r or pattern are read from params.
Property make_property(const std::string& id, const TheoryParams& params,
                       GapRule gap = GapRule::Adjacent);

// The property whose probability a Poisson row predicts.
Property property_for_statistic(const std::string& statistic, const TheoryParams& params);

}  // namespace compevo
