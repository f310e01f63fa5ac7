// Naive reimplementations used as independent oracles in tests. Written for
// clarity, not speed: every routine re-derives its answer from definitions
// (index tuples, string splitting, explicit products) and shares no code with
// the library beyond the Composition and PatternSpec value types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/patterns.hpp"

namespace brute {

using compevo::Composition;
using compevo::PatternKind;
using compevo::PatternSpec;
using compevo::Term;

inline std::string to_text(const Composition& c) {
  std::string s;
  for (std::size_t i = 0; i < c.length(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s;
}

// All n-compositions of m by recursion on the first term.
inline void compositions(std::size_t n, Term m, std::vector<Term>& prefix,
                         const std::function<void(const std::vector<Term>&)>& visit) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(m);
    visit(prefix);
    prefix.pop_back();
    return;
  }
  for (Term first = 0; first <= m; ++first) {
    prefix.push_back(first);
    compositions(n, m - first, prefix, visit);
    prefix.pop_back();
  }
}

inline std::vector<Composition> all_compositions(std::size_t n, Term m) {
  std::vector<Composition> out;
  std::vector<Term> prefix;
  compositions(n, m, prefix, [&](const std::vector<Term>& t) { out.emplace_back(t); });
  return out;
}

inline double binom(double a, double b) {
  double r = 1.0;
  for (double i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Maximal runs of positions satisfying `in_run`, as lengths.
inline std::vector<std::size_t> runs(const Composition& c, const std::function<bool(Term)>& in_run) {
  std::vector<std::size_t> out;
  std::size_t cur = 0;
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (in_run(c[i])) {
      ++cur;
    } else if (cur) {
      out.push_back(cur);
      cur = 0;
    }
  }
  if (cur) out.push_back(cur);
  return out;
}

inline std::vector<std::size_t> component_lengths(const Composition& c) {
  return runs(c, [](Term v) { return v != 0; });
}
inline std::vector<std::size_t> gap_lengths(const Composition& c) {
  return runs(c, [](Term v) { return v == 0; });
}

inline std::size_t max_or_zero(const std::vector<std::size_t>& v) {
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}
inline std::size_t min_or_zero(const std::vector<std::size_t>& v) {
  return v.empty() ? 0 : *std::min_element(v.begin(), v.end());
}

inline std::map<Term, std::uint64_t> squares(const Composition& c) {
  std::map<Term, std::uint64_t> out;
  for (Term k = 2; k <= c.length(); ++k) {
    for (std::size_t i = 0; i + k <= c.length(); ++i) {
      bool ok = true;
      for (std::size_t j = 0; j < k; ++j) ok = ok && c[i + j] == k;
      if (ok) out[k] += 1;
    }
  }
  return out;
}

inline std::size_t longest_increasing_run(const Composition& c) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.length(); ++i) {
    std::size_t j = i + 1;
    while (j < c.length() && c[j] > c[j - 1]) ++j;
    best = std::max(best, j - i);
  }
  return best;
}

inline std::size_t longest_equal_run(const Composition& c, bool nonzero_only) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (nonzero_only && c[i] == 0) continue;
    std::size_t j = i + 1;
    while (j < c.length() && c[j] == c[i]) ++j;
    best = std::max(best, j - i);
  }
  return best;
}

inline bool is_carlitz(const Composition& c) {
  for (std::size_t i = 1; i < c.length(); ++i) {
    if (c[i] == c[i - 1]) return false;
  }
  return true;
}

inline std::size_t max_multiplicity(const Composition& c) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.length(); ++i) {
    best = std::max<std::size_t>(best, std::count(c.vec().begin(), c.vec().end(), c[i]));
  }
  return best;
}

inline int sign(Term a, Term b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Whether the values at `idx` match the flattened pattern under its kind.
inline bool values_match(const Composition& c, const std::vector<std::size_t>& idx, PatternKind kind,
                         const std::vector<Term>& flat) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const Term v = c[idx[a]];
    switch (kind) {
      case PatternKind::Exact:
        if (v != flat[a]) return false;
        break;
      case PatternKind::Upper:
        if (v < flat[a]) return false;
        break;
      case PatternKind::Lower:
        if (v > flat[a]) return false;
        break;
      case PatternKind::Ordering:
        for (std::size_t b = 0; b < idx.size(); ++b) {
          if (sign(v, c[idx[b]]) != sign(flat[a], flat[b])) return false;
        }
        break;
    }
  }
  return true;
}

// Occurrences of a pattern by enumerating every increasing index tuple of
// length k and checking within-block adjacency and the inter-block gap.
inline std::uint64_t count_occurrences(const Composition& c, const PatternSpec& spec, bool strict_gap) {
  const auto flat = spec.flat();
  const std::size_t k = flat.size();
  // starts_block[a]: whether position a starts a new block.
  std::vector<bool> starts_block;
  for (const auto& block : spec.blocks()) {
    for (std::size_t j = 0; j < block.size(); ++j) starts_block.push_back(j == 0);
  }
  const bool consecutive = spec.block_count() == 1;
  const bool singletons = spec.all_singletons() && spec.block_count() > 1;
  std::uint64_t count = 0;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (idx.size() == k) {
      if (values_match(c, idx, spec.kind(), flat)) ++count;
      return;
    }
    for (std::size_t i = from; i < c.length(); ++i) {
      if (!idx.empty()) {
        const std::size_t a = idx.size();
        if (!starts_block[a] && i != idx.back() + 1) continue;
        const bool gap_rule = !consecutive && !singletons && strict_gap;
        if (starts_block[a] && gap_rule && i < idx.back() + 2) continue;
      }
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  if (k <= c.length()) rec(0);
  return count;
}

// P(X = k) for the geometric law.
inline double geometric_pmf(double p, Term k) { return (1.0 - p) * std::pow(p, static_cast<double>(k)); }

// Sum of P(c) over all c in [0, cap]^n satisfying pred; the neglected mass is
// at most 1 - (1 - p^(cap+1))^n.
inline double geometric_probability(std::size_t n, double p, Term cap,
                                    const std::function<bool(const Composition&)>& pred) {
  std::vector<Term> t(n, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    for (auto v : t) prob *= geometric_pmf(p, v);
    if (pred(Composition(t))) total += prob;
    std::size_t i = 0;
    while (i < n && t[i] == cap) t[i++] = 0;
    if (i == n) break;
    ++t[i];
  }
  return total;
}

}  // namespace brute
