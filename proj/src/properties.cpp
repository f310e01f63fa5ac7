#include "compevo/properties.hpp"

#include <algorithm>
#include <limits>

#include "compevo/analysis.hpp"

namespace compevo {

namespace {

// Calls f(value, length) for each maximal run of equal terms.
template <typename F>
void for_each_equal_run(std::span<const Term> terms, F f) {
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    f(terms[i], j - i);
    i = j;
  }
}

// Calls f(is_zero, length) for each maximal zero / nonzero run.
template <typename F>
void for_each_block(std::span<const Term> terms, F f) {
  std::size_t i = 0;
  while (i < terms.size()) {
    const bool zero = terms[i] == 0;
    std::size_t j = i + 1;
    while (j < terms.size() && (terms[j] == 0) == zero) ++j;
    f(zero, j - i);
    i = j;
  }
}

std::uint64_t windows_in_run(std::size_t run, std::uint64_t k) {
  return run >= k ? run - k + 1 : 0;
}

std::uint64_t saturating_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t raw_count(const Property& prop, const Composition& c) {
  const auto terms = c.terms();
  const std::uint64_t k = prop.parameter();
  std::uint64_t count = 0;
  switch (prop.kind()) {
    case PropertyKind::CmaxGe:
      for_each_block(terms, [&](bool zero, std::size_t len) { count += !zero && len >= k; });
      return count;
    case PropertyKind::GmaxGe:
      for_each_block(terms, [&](bool zero, std::size_t len) { count += zero && len >= k; });
      return count;
    case PropertyKind::CminGt:
      for_each_block(terms, [&](bool zero, std::size_t len) { count += !zero && len <= k; });
      return count;
    case PropertyKind::GminGt:
      for_each_block(terms, [&](bool zero, std::size_t len) { count += zero && len <= k; });
      return count;
    case PropertyKind::TmaxGe:
      for (Term t : terms) count += t >= k;
      return count;
    case PropertyKind::TminGe:
      for (Term t : terms) count += t < k;
      return count;
    case PropertyKind::EqualRun:
      for_each_equal_run(terms, [&](Term v, std::size_t len) {
        if (v != 0) count += windows_in_run(len, k);
      });
      return count;
    case PropertyKind::EqualRunAny:
      for_each_equal_run(terms, [&](Term, std::size_t len) { count += windows_in_run(len, k); });
      return count;
    case PropertyKind::Carlitz:
      for_each_equal_run(terms, [&](Term, std::size_t len) { count += windows_in_run(len, 2); });
      return count;
    case PropertyKind::EqualTerms: {
      std::vector<Term> sorted(terms.begin(), terms.end());
      std::sort(sorted.begin(), sorted.end());
      std::size_t i = 0;
      while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto add = saturating_choose(j - i, k);
        count = count > std::numeric_limits<std::uint64_t>::max() - add
                    ? std::numeric_limits<std::uint64_t>::max()
                    : count + add;
        i = j;
      }
      return count;
    }
    case PropertyKind::IncreasingRun: {
      std::size_t run = 1;
      for (std::size_t i = 1; i <= terms.size(); ++i) {
        if (i < terms.size() && terms[i] > terms[i - 1]) {
          ++run;
          continue;
        }
        count += windows_in_run(run, k);
        run = 1;
      }
      if (terms.size() == 0) return 0;
      return count;
    }
    case PropertyKind::Square:
      for_each_equal_run(terms, [&](Term v, std::size_t len) {
        if (v == k) count += windows_in_run(len, k);
      });
      return count;
    case PropertyKind::Contains: {
      MatchOptions options;
      options.gap = prop.gap();
      return match(c, *prop.pattern(), options).count;
    }
  }
  return 0;
}

bool raw_holds(const Property& prop, const Composition& c) {
  const auto terms = c.terms();
  const std::uint64_t k = prop.parameter();
  switch (prop.kind()) {
    case PropertyKind::CmaxGe:
    case PropertyKind::GmaxGe: {
      const bool want_zero = prop.kind() == PropertyKind::GmaxGe;
      std::size_t run = 0;
      for (Term t : terms) {
        run = ((t == 0) == want_zero) ? run + 1 : 0;
        if (run >= k) return true;
      }
      return false;
    }
    case PropertyKind::TmaxGe:
      return std::any_of(terms.begin(), terms.end(), [&](Term t) { return t >= k; });
    case PropertyKind::TminGe:
      return std::all_of(terms.begin(), terms.end(), [&](Term t) { return t >= k; });
    case PropertyKind::Carlitz:
      return is_carlitz(c);
    case PropertyKind::EqualTerms:
      return max_multiplicity(c) >= k;
    case PropertyKind::Contains: {
      MatchOptions options;
      options.gap = prop.gap();
      return contains(c, *prop.pattern(), options);
    }
    case PropertyKind::CminGt:
    case PropertyKind::GminGt:
      return raw_count(prop, c) == 0;
    case PropertyKind::EqualRun:
    case PropertyKind::EqualRunAny:
    case PropertyKind::IncreasingRun:
    case PropertyKind::Square:
      return raw_count(prop, c) > 0;
  }
  return false;
}

const char* kind_id(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::CmaxGe: return "cmax_ge";
    case PropertyKind::GmaxGe: return "gmax_ge";
    case PropertyKind::CminGt: return "cmin_gt";
    case PropertyKind::GminGt: return "gmin_gt";
    case PropertyKind::TmaxGe: return "tmax_ge";
    case PropertyKind::TminGe: return "tmin_ge";
    case PropertyKind::EqualRun: return "equal_run";
    case PropertyKind::EqualRunAny: return "equal_run_any";
    case PropertyKind::Carlitz: return "carlitz";
    case PropertyKind::EqualTerms: return "equal_terms";
    case PropertyKind::IncreasingRun: return "increasing_run";
    case PropertyKind::Square: return "square";
    case PropertyKind::Contains: return "contains";
  }
  return "?";
}

bool uses_r(PropertyKind kind) {
  return kind == PropertyKind::TmaxGe || kind == PropertyKind::TminGe;
}

}  // namespace

Property Property::statistic(PropertyKind kind, std::uint64_t parameter) {
  if (kind == PropertyKind::Contains) throw UsageError("use Property::contains for patterns");
  const bool needs_positive = kind != PropertyKind::Carlitz;
  if (needs_positive && parameter == 0) {
    throw UsageError(std::string(kind_id(kind)) + ": parameter must be positive");
  }
  Property p;
  p.kind_ = kind;
  p.parameter_ = parameter;
  return p;
}

Property Property::contains(PatternSpec pattern, GapRule gap) {
  Property p;
  p.kind_ = PropertyKind::Contains;
  p.pattern_ = std::move(pattern);
  p.gap_ = gap;
  return p;
}

Property Property::negate() const {
  Property p = *this;
  p.negated_ = !negated_;
  return p;
}

bool Property::holds(const Composition& c) const { return raw_holds(*this, c) != negated_; }

std::uint64_t Property::count(const Composition& c) const { return raw_count(*this, c); }

std::string Property::describe() const {
  std::string text;
  if (kind_ == PropertyKind::Contains) {
    text = "contains(" + pattern_->to_string();
    if (gap_ == GapRule::Strict && pattern_->block_count() > 1) text += ", strict";
    text += ")";
  } else if (kind_ == PropertyKind::Carlitz) {
    text = "carlitz";
  } else {
    text = std::string(kind_id(kind_)) + (uses_r(kind_) ? "(r=" : "(k=") +
           std::to_string(parameter_) + ")";
  }
  return negated_ ? "not " + text : text;
}

const std::vector<std::string>& property_ids() {
  static const std::vector<std::string> ids = {
      "cmax_ge",  "gmax_ge",     "cmin_gt",        "gmin_gt", "tmax_ge",
      "tmin_ge",  "equal_run",   "equal_run_any",  "carlitz", "equal_terms",
      "increasing_run", "square", "contains"};
  return ids;
}

Property make_property(const std::string& id, const TheoryParams& params, GapRule gap) {
  auto need_k = [&]() {
    if (!params.k) throw UsageError(id + ": missing parameter k");
    return *params.k;
  };
  auto need_r = [&]() {
    if (!params.r) throw UsageError(id + ": missing parameter r");
    return *params.r;
  };
  if (id == "cmax_ge") return Property::statistic(PropertyKind::CmaxGe, need_k());
  if (id == "gmax_ge") return Property::statistic(PropertyKind::GmaxGe, need_k());
  if (id == "cmin_gt") return Property::statistic(PropertyKind::CminGt, need_k());
  if (id == "gmin_gt") return Property::statistic(PropertyKind::GminGt, need_k());
  if (id == "tmax_ge") return Property::statistic(PropertyKind::TmaxGe, need_r());
  if (id == "tmin_ge") return Property::statistic(PropertyKind::TminGe, need_r());
  if (id == "equal_run") return Property::statistic(PropertyKind::EqualRun, need_k());
  if (id == "equal_run_any") return Property::statistic(PropertyKind::EqualRunAny, need_k());
  if (id == "carlitz") return Property::statistic(PropertyKind::Carlitz, 2);
  if (id == "equal_terms") return Property::statistic(PropertyKind::EqualTerms, need_k());
  if (id == "increasing_run") return Property::statistic(PropertyKind::IncreasingRun, need_k());
  if (id == "square") return Property::statistic(PropertyKind::Square, need_k());
  if (id == "contains") {
    if (!params.pattern) throw UsageError("contains: missing pattern");
    return Property::contains(*params.pattern, gap);
  }
  throw UsageError("unknown property id: " + id);
}

Property property_for_statistic(const std::string& statistic, const TheoryParams& params) {
  const auto& s = statistic;
  if (s == "cmax_ge" || s == "cmax_ge_sharp") return make_property("cmax_ge", params);
  if (s == "gmax_ge" || s == "gmax_ge_sharp") return make_property("gmax_ge", params);
  if (s == "cmin_gt" || s == "cmin_gt_growing") return make_property("cmin_gt", params);
  if (s == "gmin_gt" || s == "gmin_gt_growing") return make_property("gmin_gt", params);
  if (s == "exact_appear" || s == "exact_disappear" || s == "upper_appear" ||
      s == "lower_disappear" || s == "ordering_disappear") {
    return make_property("contains", params);
  }
  if (s == "equal_run_appear" || s == "equal_run_disappear") return make_property("equal_run", params);
  if (s == "tmax_ge") return make_property("tmax_ge", params);
  if (s == "tmin_ge" || s == "tmin_ge_growing") return make_property("tmin_ge", params);
  if (s == "increasing_run") return make_property("increasing_run", params);
  if (s == "carlitz") {
    TheoryParams p = params;
    if (!p.k) p.k = 2;
    return make_property("equal_run_any", p);
  }
  if (s == "equal_terms") return make_property("equal_terms", params);
  throw UsageError("statistic " + s + " has no composition property (it needs r from the regime)");
}

}  // namespace compevo
