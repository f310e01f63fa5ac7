#include "compevo/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <set>

namespace compevo {

ParseError::ParseError(const std::string& what, std::size_t position)
    : UsageError("pattern parse error at position " + std::to_string(position) + ": " + what),
      position_(position) {}

namespace {

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : text_(text) {}

  PatternSpec parse() {
    if (text_.empty()) throw ParseError("empty pattern", 0);
    const PatternKind kind = parse_kind();
    expect(':');
    if (at_end()) throw ParseError("empty pattern", pos_);
    std::vector<std::vector<Term>> blocks;
    blocks.push_back(parse_element());
    while (!at_end()) {
      expect(',');
      blocks.push_back(parse_element());
    }
    return PatternSpec(kind, std::move(blocks));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void expect(char ch) {
    if (peek() != ch) {
      throw ParseError(std::string("expected '") + ch + "'" +
                           (at_end() ? " but reached end of input"
                                     : std::string(" but found '") + peek() + "'"),
                       pos_);
    }
    ++pos_;
  }

  PatternKind parse_kind() {
    const char ch = peek();
    ++pos_;
    switch (ch) {
      case 'e': return PatternKind::Exact;
      case 'u': return PatternKind::Upper;
      case 'l': return PatternKind::Lower;
      case 'o': return PatternKind::Ordering;
      default: throw ParseError("unknown pattern kind (expected e, u, l or o)", pos_ - 1);
    }
  }

  Term parse_term() {
    const std::size_t start = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("expected a nonnegative integer term", pos_);
    }
    Term value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      const Term digit = static_cast<Term>(peek() - '0');
      if (value > (std::numeric_limits<Term>::max() - digit) / 10) {
        throw ParseError("term out of range", start);
      }
      value = value * 10 + digit;
      ++pos_;
    }
    return value;
  }

  std::vector<Term> parse_element() {
    if (peek() != '[') return {parse_term()};
    ++pos_;
    std::vector<Term> block{parse_term()};
    while (peek() == ',') {
      ++pos_;
      block.push_back(parse_term());
    }
    expect(']');
    return block;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Pattern positions sorted by pattern value, with `equal_to_prev[t]` telling
// whether order[t] and order[t-1] carry equal pattern values. Checking the
// k-1 adjacent pairs of this order is equivalent to checking all k^2 pairs.
struct OrderChain {
  std::vector<std::size_t> order;
  std::vector<bool> equal_to_prev;

  explicit OrderChain(const std::vector<Term>& pattern) : order(pattern.size()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pattern[a] < pattern[b]; });
    equal_to_prev.assign(order.size(), false);
    for (std::size_t t = 1; t < order.size(); ++t) {
      equal_to_prev[t] = pattern[order[t]] == pattern[order[t - 1]];
    }
  }

  bool matches(std::span<const Term> terms, std::size_t start) const {
    for (std::size_t t = 1; t < order.size(); ++t) {
      const Term a = terms[start + order[t - 1]];
      const Term b = terms[start + order[t]];
      if (equal_to_prev[t] ? a != b : !(a < b)) return false;
    }
    return true;
  }
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, bool& saturated) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    saturated = true;
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a + b;
}

void require_value_kind(const PatternSpec& spec, const char* who) {
  if (spec.kind() == PatternKind::Ordering) {
    throw GuardError(std::string(who) +
                     ": ordering patterns with mixed block structure are not supported");
  }
}

// Counts block-anchor tuples of an exact/upper/lower block pattern whose
// blocks occur in order with at least `min_gap` free positions between them.
MatchReport count_block_tuples(const Composition& c, const PatternSpec& spec, std::size_t min_gap,
                               const MatchOptions& options) {
  const auto terms = c.terms();
  const std::size_t n = terms.size();
  const auto& blocks = spec.blocks();
  const std::size_t B = blocks.size();

  // anchors[b][a]: block b matches with its first term at 0-based a.
  std::vector<std::vector<char>> anchors(B, std::vector<char>(n, 0));
  for (std::size_t b = 0; b < B; ++b) {
    const std::size_t len = blocks[b].size();
    if (len > n) continue;
    for (std::size_t a = 0; a + len <= n; ++a) {
      anchors[b][a] = window_matches(terms, a, spec.kind(), blocks[b]) ? 1 : 0;
    }
  }

  MatchReport report;
  bool saturated = false;
  // ways[a]: tuples for blocks 0..b with block b anchored at a.
  std::vector<std::uint64_t> ways(n, 0);
  for (std::size_t a = 0; a < n; ++a) ways[a] = anchors[0][a];
  for (std::size_t b = 1; b < B; ++b) {
    const std::size_t shift = blocks[b - 1].size() + min_gap;
    std::vector<std::uint64_t> next(n, 0);
    std::uint64_t prefix = 0;  // sum of ways[x] for x <= a - shift
    for (std::size_t a = 0; a < n; ++a) {
      if (a >= shift) prefix = saturating_add(prefix, ways[a - shift], saturated);
      if (anchors[b][a]) next[a] = prefix;
    }
    ways.swap(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = saturating_add(total, w, saturated);
  report.count = total;
  report.exists = total > 0;
  report.truncated = saturated;

  if (options.collect_positions && report.exists) {
    std::vector<std::size_t> tuple;
    auto collect = [&](auto&& self, std::size_t b, std::size_t from) -> void {
      if (report.positions.size() >= options.max_positions) return;
      if (b == B) {
        report.positions.push_back(tuple);
        return;
      }
      for (std::size_t a = from; a < n; ++a) {
        if (!anchors[b][a]) continue;
        tuple.push_back(a + 1);
        self(self, b + 1, a + blocks[b].size() + min_gap);
        tuple.pop_back();
        if (report.positions.size() >= options.max_positions) return;
      }
    };
    collect(collect, 0, 0);
  }
  return report;
}

// Depth-first search over increasing index tuples whose values are
// order-isomorphic to `pattern`. Stops after `budget` search nodes or, when
// stop_at_first, at the first complete tuple.
struct OrderingSearch {
  std::span<const Term> terms;
  const std::vector<Term>& pattern;
  std::uint64_t budget;
  bool stop_at_first;
  std::size_t max_positions;
  bool collect;

  std::uint64_t visited = 0;
  std::uint64_t found = 0;
  bool exhausted = false;
  std::vector<std::size_t> chosen;
  std::vector<std::vector<std::size_t>> positions;

  bool consistent(std::size_t index) const {
    const std::size_t depth = chosen.size();
    const Term v = terms[index];
    for (std::size_t j = 0; j < depth; ++j) {
      const Term u = terms[chosen[j]];
      const Term pu = pattern[j];
      const Term pv = pattern[depth];
      if ((u < v) != (pu < pv) || (u == v) != (pu == pv)) return false;
    }
    return true;
  }

  // Returns false when the search must stop.
  bool run(std::size_t from) {
    const std::size_t k = pattern.size();
    if (chosen.size() == k) {
      ++found;
      if (collect && positions.size() < max_positions) {
        std::vector<std::size_t> one;
        for (auto i : chosen) one.push_back(i + 1);
        positions.push_back(std::move(one));
      }
      return !stop_at_first;
    }
    const std::size_t remaining = k - chosen.size();
    for (std::size_t i = from; i + remaining <= terms.size(); ++i) {
      if (++visited > budget) {
        exhausted = true;
        return false;
      }
      if (!consistent(i)) continue;
      chosen.push_back(i);
      const bool keep_going = run(i + 1);
      chosen.pop_back();
      if (!keep_going) return false;
    }
    return true;
  }
};

}  // namespace

PatternSpec parse_pattern(std::string_view text) {
  PatternSpec spec = PatternParser(text).parse();
  if (spec.kind() == PatternKind::Ordering && !is_initial_segment(spec.flat())) {
    throw ParseError("ordering pattern values must be an initial segment {0,...,r}", 2);
  }
  return spec;
}

bool is_initial_segment(const std::vector<Term>& terms) {
  std::set<Term> distinct(terms.begin(), terms.end());
  Term expected = 0;
  for (Term v : distinct) {
    if (v != expected) return false;
    ++expected;
  }
  return !distinct.empty();
}

bool term_matches(PatternKind kind, Term value, Term pattern_term) {
  switch (kind) {
    case PatternKind::Exact: return value == pattern_term;
    case PatternKind::Upper: return value >= pattern_term;
    case PatternKind::Lower: return value <= pattern_term;
    case PatternKind::Ordering: break;
  }
  throw UsageError("term_matches: ordering patterns compare whole windows");
}

bool window_matches(std::span<const Term> terms, std::size_t start, PatternKind kind,
                    const std::vector<Term>& block) {
  if (kind == PatternKind::Ordering) return OrderChain(block).matches(terms, start);
  for (std::size_t j = 0; j < block.size(); ++j) {
    if (!term_matches(kind, terms[start + j], block[j])) return false;
  }
  return true;
}

MatchReport match_consecutive(const Composition& c, const PatternSpec& spec,
                              const MatchOptions& options) {
  if (!spec.is_consecutive()) throw UsageError("match_consecutive: pattern has several blocks");
  const auto terms = c.terms();
  const auto& block = spec.blocks().front();
  const std::size_t k = block.size();
  MatchReport report;
  if (k > terms.size()) return report;

  const bool ordering = spec.kind() == PatternKind::Ordering;
  const OrderChain chain(ordering ? block : std::vector<Term>{0});
  for (std::size_t i = 0; i + k <= terms.size(); ++i) {
    const bool hit = ordering ? chain.matches(terms, i) : window_matches(terms, i, spec.kind(), block);
    if (!hit) continue;
    ++report.count;
    if (options.collect_positions && report.positions.size() < options.max_positions) {
      report.positions.push_back({i + 1});
    }
  }
  report.exists = report.count > 0;
  return report;
}

MatchReport match_vincular(const Composition& c, const PatternSpec& spec,
                           const MatchOptions& options) {
  if (spec.is_consecutive()) return match_consecutive(c, spec, options);
  if (spec.kind() == PatternKind::Ordering) {
    if (spec.all_singletons()) return match_nonconsecutive(c, spec, options);
    require_value_kind(spec, "match_vincular");
  }
  const std::size_t min_gap = options.gap == GapRule::Strict ? 1 : 0;
  return count_block_tuples(c, spec, min_gap, options);
}

MatchReport match_nonconsecutive(const Composition& c, const PatternSpec& spec,
                                 const MatchOptions& options) {
  if (!spec.all_singletons()) {
    throw UsageError("match_nonconsecutive: pattern has a block longer than one term");
  }
  if (spec.kind() != PatternKind::Ordering) return count_block_tuples(c, spec, 0, options);

  const auto pattern = spec.flat();
  if (pattern.size() > kMaxNonconsecutiveOrderingLength) {
    throw GuardError("nonconsecutive ordering patterns are limited to length " +
                     std::to_string(kMaxNonconsecutiveOrderingLength));
  }
  OrderingSearch counting{c.terms(), pattern, options.count_cap, false,
                          options.max_positions, options.collect_positions};
  counting.run(0);
  MatchReport report;
  report.count = counting.found;
  report.positions = std::move(counting.positions);
  if (!counting.exhausted) {
    report.exists = report.count > 0;
    return report;
  }
  report.truncated = true;
  if (report.count > 0) {
    report.exists = true;
    return report;
  }
  OrderingSearch existence{c.terms(), pattern, options.existence_cap, true, 0, false};
  existence.run(0);
  if (existence.found > 0) {
    report.exists = true;
  } else if (existence.exhausted) {
    throw GuardError("nonconsecutive ordering search exceeded its node budget");
  }
  return report;
}

MatchReport match(const Composition& c, const PatternSpec& spec, const MatchOptions& options) {
  switch (spec.structure()) {
    case PatternStructure::Consecutive: return match_consecutive(c, spec, options);
    case PatternStructure::Nonconsecutive: return match_nonconsecutive(c, spec, options);
    case PatternStructure::Vincular: return match_vincular(c, spec, options);
  }
  return {};
}

bool contains(const Composition& c, const PatternSpec& spec, const MatchOptions& options) {
  if (spec.kind() != PatternKind::Ordering || spec.is_consecutive()) {
    return match(c, spec, options).exists;
  }
  if (!spec.all_singletons()) require_value_kind(spec, "contains");
  const auto pattern = spec.flat();
  if (pattern.size() > kMaxNonconsecutiveOrderingLength) {
    throw GuardError("nonconsecutive ordering patterns are limited to length " +
                     std::to_string(kMaxNonconsecutiveOrderingLength));
  }
  OrderingSearch existence{c.terms(), pattern, options.existence_cap, true, 0, false};
  existence.run(0);
  if (existence.found > 0) return true;
  if (existence.exhausted) throw GuardError("nonconsecutive ordering search exceeded its node budget");
  return false;
}

}  // namespace compevo
