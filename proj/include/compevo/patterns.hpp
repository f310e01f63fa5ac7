// Pattern DSL and occurrence matching.
//
// Grammar (no whitespace):
//   pattern := kind ':' seq
//   kind    := 'e' | 'u' | 'l' | 'o'        exact / upper / lower / ordering
//   seq     := element (',' element)*
//   element := term | '[' term (',' term)* ']'
//   term    := decimal nonnegative integer
//
// A bracketed group is one block whose terms must be adjacent; a bare term
// is a singleton block. One block is a consecutive pattern, all singletons a
// nonconsecutive one, anything else vincular.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "compevo/core.hpp"

namespace compevo {

class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t position);
  // 0-based offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

PatternSpec parse_pattern(std::string_view text);

// Ordering patterns must use exactly the values {0, 1, ..., r}.
bool is_initial_segment(const std::vector<Term>& terms);

// Separation between consecutive blocks of a vincular pattern.
enum class GapRule {
  Adjacent,  // blocks in order and disjoint; gap >= 0
  Strict,    // at least one free position between blocks; gap >= 1
};

struct MatchOptions {
  GapRule gap = GapRule::Adjacent;
  bool collect_positions = false;
  std::size_t max_positions = 1000;
  // Search-node budget for counting nonconsecutive ordering occurrences.
  std::uint64_t count_cap = 10'000'000;
  // Search-node budget for deciding existence when counting was truncated.
  std::uint64_t existence_cap = 2'000'000'000;
};

struct MatchReport {
  std::uint64_t count = 0;
  bool exists = false;
  // Set when `count` is only a lower bound (search cap hit or the count
  // saturated 64 bits).
  bool truncated = false;
  // 1-based anchor tuples: window starts for consecutive patterns, block
  // starts for vincular and nonconsecutive ones.
  std::vector<std::vector<std::size_t>> positions;
};

constexpr std::size_t kMaxNonconsecutiveOrderingLength = 8;

// Whether a single composition value satisfies one exact/upper/lower term.
bool term_matches(PatternKind kind, Term value, Term pattern_term);

// True when c(start .. start+k-1) (0-based start) matches the whole of a
// consecutive spec, or one block given as `block`.
bool window_matches(std::span<const Term> terms, std::size_t start, PatternKind kind,
                    const std::vector<Term>& block);

MatchReport match_consecutive(const Composition& c, const PatternSpec& spec,
                              const MatchOptions& options = {});
MatchReport match_vincular(const Composition& c, const PatternSpec& spec,
                           const MatchOptions& options = {});
MatchReport match_nonconsecutive(const Composition& c, const PatternSpec& spec,
                                 const MatchOptions& options = {});

// Dispatches on spec.structure().
MatchReport match(const Composition& c, const PatternSpec& spec, const MatchOptions& options = {});
bool contains(const Composition& c, const PatternSpec& spec, const MatchOptions& options = {});

}  // namespace compevo
