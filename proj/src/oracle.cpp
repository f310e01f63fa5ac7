#include "compevo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace compevo {

namespace {

// ---------------------------------------------------------------------------
// Recognizers

class RunRecognizer : public Recognizer {
 public:
  // Tracks maximal runs of zero terms (zero = true) or nonzero terms and
  // accepts when some run has length >= k (at_least) or <= k (otherwise).
  RunRecognizer(bool zero, bool at_least, std::uint64_t k) : zero_(zero), at_least_(at_least), k_(k) {}

  std::optional<Term> equivalence_cap() const override { return 0; }
  AutomatonState initial() const override { return {0, 0}; }

  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    emitted = 0;
    std::int64_t run = s[0];
    std::int64_t found = s[1];
    const bool in_run = (value == 0) == zero_;
    const auto k = static_cast<std::int64_t>(k_);
    if (at_least_) {
      if (in_run) {
        run = std::min(run + 1, k);
        if (run == k && s[0] == k - 1) {
          emitted = 1;
          found = 1;
        }
      } else {
        run = 0;
      }
    } else {
      if (in_run) {
        run = std::min(run + 1, k + 1);
      } else {
        if (run >= 1 && run <= k) {
          emitted = 1;
          found = 1;
        }
        run = 0;
      }
    }
    return {run, found};
  }

  std::uint64_t final_emitted(const AutomatonState& s) const {
    return !at_least_ && s[0] >= 1 && s[0] <= static_cast<std::int64_t>(k_) ? 1 : 0;
  }

  bool accepts(const AutomatonState& s) const override {
    return s[1] != 0 || final_emitted(s) != 0;
  }

 private:
  bool zero_;
  bool at_least_;
  std::uint64_t k_;
};

class TermRecognizer : public Recognizer {
 public:
  // Accepts when some term is >= r (large = true) or some term is < r.
  TermRecognizer(bool large, std::uint64_t r) : large_(large), r_(r) {}

  std::optional<Term> equivalence_cap() const override { return r_ - 1; }
  AutomatonState initial() const override { return {0}; }
  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    const bool hit = large_ ? value >= r_ : value < r_;
    emitted = hit ? 1 : 0;
    return {s[0] | (hit ? 1 : 0)};
  }
  bool accepts(const AutomatonState& s) const override { return s[0] != 0; }

 private:
  bool large_;
  std::uint64_t r_;
};

// Shift-and automaton for one exact/upper/lower consecutive block.
class ShiftAndRecognizer : public Recognizer {
 public:
  ShiftAndRecognizer(PatternKind kind, std::vector<Term> block) : kind_(kind), block_(std::move(block)) {
    if (block_.size() > 62) throw GuardError("consecutive pattern too long for the DP oracle");
    cap_ = *std::max_element(block_.begin(), block_.end());
  }

  std::optional<Term> equivalence_cap() const override { return cap_; }
  AutomatonState initial() const override { return {0, 0}; }

  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    std::uint64_t mask = (static_cast<std::uint64_t>(s[0]) << 1) | 1u;
    mask &= value_mask(value);
    const std::uint64_t done = std::uint64_t{1} << (block_.size() - 1);
    emitted = (mask & done) ? 1 : 0;
    const std::int64_t found = s[1] | static_cast<std::int64_t>(emitted);
    // Keep only partial matches; the completed bit has no successor.
    mask &= done - 1;
    return {static_cast<std::int64_t>(mask), found};
  }

  bool accepts(const AutomatonState& s) const override { return s[1] != 0; }

 private:
  std::uint64_t value_mask(Term value) const {
    std::uint64_t m = 0;
    for (std::size_t j = 0; j < block_.size(); ++j) {
      if (term_matches(kind_, value, block_[j])) m |= std::uint64_t{1} << j;
    }
    return m;
  }

  PatternKind kind_;
  std::vector<Term> block_;
  Term cap_ = 0;
};

// Greedy leftmost matching of exact/upper/lower blocks in order. Existence
// only; a block is searched only after the previous block ended and the
// required gap passed.
class BlockSequenceRecognizer : public Recognizer {
 public:
  BlockSequenceRecognizer(PatternKind kind, std::vector<std::vector<Term>> blocks, std::size_t min_gap)
      : kind_(kind), blocks_(std::move(blocks)), min_gap_(min_gap) {
    for (const auto& b : blocks_) {
      if (b.size() > 62) throw GuardError("pattern block too long for the DP oracle");
      cap_ = std::max(cap_, *std::max_element(b.begin(), b.end()));
    }
  }

  std::optional<Term> equivalence_cap() const override { return cap_; }
  // [block index, partial-match mask, positions still to skip]
  AutomatonState initial() const override { return {0, 0, 0}; }

  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    emitted = 0;
    const auto b = static_cast<std::size_t>(s[0]);
    if (b == blocks_.size()) return s;
    if (s[2] > 0) return {s[0], 0, s[2] - 1};
    const auto& block = blocks_[b];
    std::uint64_t mask = (static_cast<std::uint64_t>(s[1]) << 1) | 1u;
    std::uint64_t allowed = 0;
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (term_matches(kind_, value, block[j])) allowed |= std::uint64_t{1} << j;
    }
    mask &= allowed;
    const std::uint64_t done = std::uint64_t{1} << (block.size() - 1);
    if (mask & done) {
      return {static_cast<std::int64_t>(b + 1), 0, static_cast<std::int64_t>(min_gap_)};
    }
    return {s[0], static_cast<std::int64_t>(mask), 0};
  }

  bool accepts(const AutomatonState& s) const override {
    return static_cast<std::size_t>(s[0]) == blocks_.size();
  }

 private:
  PatternKind kind_;
  std::vector<std::vector<Term>> blocks_;
  std::size_t min_gap_;
  Term cap_ = 0;
};

// Consecutive ordering pattern; the state keeps the last k-1 values.
class OrderingWindowRecognizer : public Recognizer {
 public:
  explicit OrderingWindowRecognizer(std::vector<Term> pattern) : pattern_(std::move(pattern)) {}

  std::optional<Term> equivalence_cap() const override { return std::nullopt; }
  AutomatonState initial() const override { return {0}; }

  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    const std::size_t k = pattern_.size();
    std::vector<Term> window;
    window.reserve(k);
    for (std::size_t i = 1; i < s.size(); ++i) window.push_back(static_cast<Term>(s[i]));
    window.push_back(value);
    emitted = 0;
    std::int64_t found = s[0];
    if (window.size() == k) {
      if (window_matches(window, 0, PatternKind::Ordering, pattern_)) {
        emitted = 1;
        found = 1;
      }
      window.erase(window.begin());
    }
    AutomatonState next{found};
    for (Term v : window) next.push_back(static_cast<std::int64_t>(v));
    return next;
  }

  bool accepts(const AutomatonState& s) const override { return s[0] != 0; }

 private:
  std::vector<Term> pattern_;
};

// k consecutive equal terms (nonzero only if requested), or k consecutive
// strictly increasing terms.
class ValueRunRecognizer : public Recognizer {
 public:
  enum class Mode { Equal, EqualNonzero, Increasing };
  ValueRunRecognizer(Mode mode, std::uint64_t k) : mode_(mode), k_(k) {}

  std::optional<Term> equivalence_cap() const override { return std::nullopt; }
  // [last value (-1 before the first term), run length capped at k, found]
  AutomatonState initial() const override { return {-1, 0, 0}; }

  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    const auto v = static_cast<std::int64_t>(value);
    const auto k = static_cast<std::int64_t>(k_);
    std::int64_t run = 1;
    if (s[0] >= 0) {
      const bool extends = mode_ == Mode::Increasing ? v > s[0] : v == s[0];
      if (extends) run = std::min(s[1] + 1, k);
    }
    if (mode_ == Mode::EqualNonzero && v == 0) run = 0;
    emitted = run >= k ? 1 : 0;
    return {v, run, s[2] | static_cast<std::int64_t>(emitted)};
  }

  bool accepts(const AutomatonState& s) const override { return s[2] != 0; }

 private:
  Mode mode_;
  std::uint64_t k_;
};

class NegatedRecognizer : public Recognizer {
 public:
  explicit NegatedRecognizer(std::unique_ptr<Recognizer> inner) : inner_(std::move(inner)) {}
  std::optional<Term> equivalence_cap() const override { return inner_->equivalence_cap(); }
  AutomatonState initial() const override { return inner_->initial(); }
  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    return inner_->step(s, value, emitted);
  }
  bool accepts(const AutomatonState& s) const override { return !inner_->accepts(s); }

 private:
  std::unique_ptr<Recognizer> inner_;
};

class CounterRecognizer : public Recognizer {
 public:
  enum class What { Components, Gaps, Nonzero };
  explicit CounterRecognizer(What what) : what_(what) {}
  std::optional<Term> equivalence_cap() const override { return 0; }
  // [previous term was nonzero: 1, zero: 0, none yet: -1]
  AutomatonState initial() const override { return {-1}; }
  AutomatonState step(const AutomatonState& s, Term value, std::uint64_t& emitted) const override {
    const std::int64_t nonzero = value != 0 ? 1 : 0;
    switch (what_) {
      case What::Components: emitted = nonzero == 1 && s[0] != 1; break;
      case What::Gaps: emitted = nonzero == 0 && s[0] != 0; break;
      case What::Nonzero: emitted = nonzero; break;
    }
    return {nonzero};
  }
  bool accepts(const AutomatonState&) const override { return true; }

 private:
  What what_;
};

std::uint64_t final_emitted(const Recognizer& r, const AutomatonState& s) {
  if (const auto* run = dynamic_cast<const RunRecognizer*>(&r)) return run->final_emitted(s);
  return 0;
}

std::unique_ptr<Recognizer> recognizer_for_pattern(const PatternSpec& spec, GapRule gap) {
  if (spec.kind() == PatternKind::Ordering) {
    if (spec.is_consecutive()) return std::make_unique<OrderingWindowRecognizer>(spec.blocks().front());
    throw GuardError("nonconsecutive and vincular ordering patterns are not automaton-recognizable");
  }
  if (spec.is_consecutive()) {
    return std::make_unique<ShiftAndRecognizer>(spec.kind(), spec.blocks().front());
  }
  const std::size_t min_gap = spec.all_singletons() || gap == GapRule::Adjacent ? 0 : 1;
  return std::make_unique<BlockSequenceRecognizer>(spec.kind(), spec.blocks(), min_gap);
}

// ---------------------------------------------------------------------------
// DP engine

struct StateHash {
  std::size_t operator()(const AutomatonState& s) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (auto v : s) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001B3ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

struct TransitionTable {
  std::vector<AutomatonState> states;
  // next[state * alphabet + symbol], emit likewise
  std::vector<std::uint32_t> next;
  std::vector<std::uint32_t> emit;
  std::size_t alphabet = 0;
};

// Interns the states reachable from the initial state when feeding the given
// symbol values.
TransitionTable build_table(const Recognizer& r, const std::vector<Term>& symbols,
                            std::size_t max_states) {
  TransitionTable t;
  t.alphabet = symbols.size();
  std::unordered_map<AutomatonState, std::uint32_t, StateHash> index;
  auto intern = [&](AutomatonState s) {
    auto [it, inserted] = index.emplace(s, static_cast<std::uint32_t>(t.states.size()));
    if (inserted) {
      if (t.states.size() >= max_states) {
        throw GuardError("DP oracle: automaton exceeds " + std::to_string(max_states) + " states");
      }
      t.states.push_back(std::move(s));
    }
    return it->second;
  };
  intern(r.initial());
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    for (std::size_t a = 0; a < symbols.size(); ++a) {
      std::uint64_t emitted = 0;
      AutomatonState s = r.step(t.states[i], symbols[a], emitted);
      const auto id = intern(std::move(s));
      t.next.push_back(id);
      t.emit.push_back(static_cast<std::uint32_t>(emitted));
    }
  }
  return t;
}

double term_prob(const GeometricRate& rate, Term v) {
  if (rate.p == 0.0) return v == 0 ? 1.0 : 0.0;
  return rate.q * std::exp(static_cast<double>(v) * rate.log_p());
}

double tail_prob(const GeometricRate& rate, Term v) {  // P(term >= v)
  if (v == 0) return 1.0;
  if (rate.p == 0.0) return 0.0;
  return std::exp(static_cast<double>(v) * rate.log_p());
}

// 1 - (1 - p^(V+1))^count
double truncation_width(const GeometricRate& rate, Term V, double count) {
  const double tail = tail_prob(rate, V + 1);
  return -std::expm1(count * std::log1p(-tail));
}

struct Alphabet {
  std::vector<Term> values;  // values fed to the recognizer
  std::vector<double> probs;
  bool truncated = false;
  double sink_prob = 0.0;  // mass of values > cap when truncated
  Term cap = 0;
  bool width_ok = true;
};

Alphabet make_alphabet(std::uint64_t n, const GeometricRate& rate, const Recognizer& r,
                       const DpOptions& options) {
  Alphabet a;
  if (const auto cap = r.equivalence_cap()) {
    a.cap = *cap;
    for (Term v = 0; v <= *cap; ++v) {
      a.values.push_back(v);
      a.probs.push_back(term_prob(rate, v));
    }
    a.values.push_back(*cap + 1);  // stands for every value > cap
    a.probs.push_back(tail_prob(rate, *cap + 1));
    return a;
  }
  Term V = 0;
  if (rate.p > 0.0) {
    V = 1;
    while (V < options.max_value_cap &&
           truncation_width(rate, V, static_cast<double>(n)) > options.width_target) {
      ++V;
    }
    a.width_ok = truncation_width(rate, V, static_cast<double>(n)) <= options.width_target;
  }
  a.cap = V;
  a.truncated = true;
  for (Term v = 0; v <= V; ++v) {
    a.values.push_back(v);
    a.probs.push_back(term_prob(rate, v));
  }
  a.sink_prob = tail_prob(rate, V + 1);
  return a;
}

struct DpOutcome {
  double accept = 0.0;
  double sink = 0.0;
  double expected = 0.0;
};

DpOutcome run_dp(std::uint64_t n, const Recognizer& r, const Alphabet& a, const DpOptions& options) {
  if (a.values.size() * std::min<std::size_t>(options.max_states, 1'000'000) > 400'000'000) {
    throw GuardError("DP oracle: alphabet too large");
  }
  const auto table = build_table(r, a.values, options.max_states);
  const std::size_t S = table.states.size();
  const std::size_t A = table.alphabet;
  if (S * A > 50'000'000) throw GuardError("DP oracle: transition table too large");
  std::vector<double> dist(S, 0.0), next(S, 0.0);
  dist[0] = 1.0;
  DpOutcome out;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const double w = dist[s];
      if (w == 0.0) continue;
      const std::size_t base = s * A;
      for (std::size_t sym = 0; sym < A; ++sym) {
        const double m = w * a.probs[sym];
        next[table.next[base + sym]] += m;
        if (table.emit[base + sym]) out.expected += m * table.emit[base + sym];
      }
      if (a.truncated) out.sink += w * a.sink_prob;
    }
    dist.swap(next);
  }
  for (std::size_t s = 0; s < S; ++s) {
    if (r.accepts(table.states[s])) out.accept += dist[s];
    out.expected += dist[s] * static_cast<double>(final_emitted(r, table.states[s]));
  }
  return out;
}

}  // namespace

std::string to_string(OracleMethod method) {
  return method == OracleMethod::Enumeration ? "enumeration" : "transfer_dp";
}

std::uint64_t enumerate_uniform(std::uint64_t n, std::uint64_t m,
                                const std::function<void(const Composition&)>& visit,
                                std::uint64_t guard) {
  if (n == 0) throw UsageError("enumeration needs n >= 1");
  if (count_compositions(n, m) > guard) {
    throw GuardError("enumeration guard exceeded: binom(m+n-1, m) > " + std::to_string(guard));
  }
  std::vector<Term> c(n, 0);
  c[n - 1] = m;
  std::uint64_t visited = 0;
  while (true) {
    visit(Composition(c));
    ++visited;
    // Successor: move one unit from the last nonzero term leftwards and put
    // the remainder at the end.
    std::size_t j = n - 1;
    while (j > 0 && c[j] == 0) --j;
    if (j == 0) break;
    const Term t = c[j];
    c[j] = 0;
    c[j - 1] += 1;
    c[n - 1] = t - 1;
  }
  return visited;
}

ExactProbability exact_prob_uniform(std::uint64_t n, std::uint64_t m,
                                    const std::function<bool(const Composition&)>& predicate,
                                    std::uint64_t guard) {
  std::uint64_t hits = 0;
  const std::uint64_t total = enumerate_uniform(
      n, m, [&](const Composition& c) { hits += predicate(c) ? 1 : 0; }, guard);
  ExactProbability out;
  out.method = OracleMethod::Enumeration;
  out.rational = Rational(BigInt(hits), BigInt(total));
  out.lo = out.hi = static_cast<double>(*out.rational);
  return out;
}

ExactProbability exact_prob_uniform(std::uint64_t n, std::uint64_t m, const Property& property,
                                    std::uint64_t guard) {
  return exact_prob_uniform(
      n, m, [&](const Composition& c) { return property.holds(c); }, guard);
}

std::unique_ptr<Recognizer> make_recognizer(const Property& property) {
  std::unique_ptr<Recognizer> r;
  const auto k = property.parameter();
  using Mode = ValueRunRecognizer::Mode;
  switch (property.kind()) {
    case PropertyKind::CmaxGe: r = std::make_unique<RunRecognizer>(false, true, k); break;
    case PropertyKind::GmaxGe: r = std::make_unique<RunRecognizer>(true, true, k); break;
    case PropertyKind::CminGt:
      r = std::make_unique<NegatedRecognizer>(std::make_unique<RunRecognizer>(false, false, k));
      break;
    case PropertyKind::GminGt:
      r = std::make_unique<NegatedRecognizer>(std::make_unique<RunRecognizer>(true, false, k));
      break;
    case PropertyKind::TmaxGe: r = std::make_unique<TermRecognizer>(true, k); break;
    case PropertyKind::TminGe:
      r = std::make_unique<NegatedRecognizer>(std::make_unique<TermRecognizer>(false, k));
      break;
    case PropertyKind::EqualRun: r = std::make_unique<ValueRunRecognizer>(Mode::EqualNonzero, k); break;
    case PropertyKind::EqualRunAny: r = std::make_unique<ValueRunRecognizer>(Mode::Equal, k); break;
    case PropertyKind::Carlitz:
      r = std::make_unique<NegatedRecognizer>(std::make_unique<ValueRunRecognizer>(Mode::Equal, 2));
      break;
    case PropertyKind::IncreasingRun:
      r = std::make_unique<ValueRunRecognizer>(Mode::Increasing, k);
      break;
    case PropertyKind::Square:
      r = std::make_unique<ShiftAndRecognizer>(PatternKind::Exact, std::vector<Term>(k, k));
      break;
    case PropertyKind::Contains: r = recognizer_for_pattern(*property.pattern(), property.gap()); break;
    case PropertyKind::EqualTerms:
      throw GuardError("equal terms anywhere is not automaton-recognizable");
  }
  if (property.negated()) r = std::make_unique<NegatedRecognizer>(std::move(r));
  return r;
}

ExactProbability exact_prob_geometric(std::uint64_t n, const GeometricRate& rate,
                                      const Recognizer& recognizer, const DpOptions& options) {
  if (n == 0) throw UsageError("DP oracle needs n >= 1");
  const Alphabet a = make_alphabet(n, rate, recognizer, options);
  const DpOutcome dp = run_dp(n, recognizer, a, options);
  ExactProbability out;
  out.method = OracleMethod::TransferDp;
  out.value_cap = a.cap;
  out.truncated = a.truncated;
  out.width_ok = a.width_ok;
  out.lo = std::clamp(dp.accept, 0.0, 1.0);
  out.hi = a.truncated ? std::clamp(dp.accept + dp.sink, 0.0, 1.0) : out.lo;
  return out;
}

ExactProbability exact_prob_geometric(std::uint64_t n, const GeometricRate& rate,
                                      const Property& property, const DpOptions& options) {
  const auto r = make_recognizer(property);
  return exact_prob_geometric(n, rate, *r, options);
}

double expected_count_geometric(std::uint64_t n, const GeometricRate& rate,
                                const Recognizer& recognizer, const DpOptions& options) {
  if (!recognizer.equivalence_cap()) {
    throw GuardError("expected counts need a recognizer with a finite value cap");
  }
  const Alphabet a = make_alphabet(n, rate, recognizer, options);
  return run_dp(n, recognizer, a, options).expected;
}

std::unique_ptr<Recognizer> component_counter() {
  return std::make_unique<CounterRecognizer>(CounterRecognizer::What::Components);
}
std::unique_ptr<Recognizer> gap_counter() {
  return std::make_unique<CounterRecognizer>(CounterRecognizer::What::Gaps);
}
std::unique_ptr<Recognizer> nonzero_counter() {
  return std::make_unique<CounterRecognizer>(CounterRecognizer::What::Nonzero);
}

double exact_prob_geometric_joint_size(std::uint64_t n, const GeometricRate& rate, std::uint64_t m,
                                       const Property& property, const DpOptions& options) {
  const auto r = make_recognizer(property);
  std::vector<Term> values;
  for (Term v = 0; v <= m; ++v) values.push_back(v);
  const auto table = build_table(*r, values, options.max_states);
  const std::size_t S = table.states.size();
  const std::size_t A = table.alphabet;
  std::vector<double> probs;
  for (Term v = 0; v <= m; ++v) probs.push_back(term_prob(rate, v));
  // dist[state * (m+1) + size]
  const std::size_t W = m + 1;
  std::vector<double> dist(S * W, 0.0), next(S * W, 0.0);
  dist[0] = 1.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t size = 0; size < W; ++size) {
        const double w = dist[s * W + size];
        if (w == 0.0) continue;
        for (std::size_t v = 0; v + size < W; ++v) {
          next[table.next[s * A + v] * W + size + v] += w * probs[v];
        }
      }
    }
    dist.swap(next);
  }
  double total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    if (r->accepts(table.states[s])) total += dist[s * W + m];
  }
  return total;
}

double prob_size_geometric(std::uint64_t n, const GeometricRate& rate, std::uint64_t m) {
  if (n == 0) throw UsageError("n must be positive");
  if (m == 0) return std::exp(static_cast<double>(n) * rate.log_q());
  if (rate.p == 0.0) return 0.0;
  using boost::math::lgamma;
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double log_binom = lgamma(mm + nn) - lgamma(mm + 1.0) - lgamma(nn);
  return std::exp(log_binom + mm * rate.log_p() + nn * rate.log_q());
}

ExactProbability exact_window_probability(std::size_t k, const GeometricRate& rate,
                                          const std::function<bool(std::span<const Term>)>& predicate,
                                          double width_target, std::uint64_t max_tuples) {
  if (k == 0) throw UsageError("window length must be positive");
  Term V = 0;
  if (rate.p > 0.0) {
    V = 1;
    auto tuples = [&](Term v) { return std::pow(static_cast<double>(v) + 1.0, static_cast<double>(k)); };
    while (truncation_width(rate, V, static_cast<double>(k)) > width_target &&
           tuples(V + 1) <= static_cast<double>(max_tuples)) {
      ++V;
    }
  }
  ExactProbability out;
  out.method = OracleMethod::TransferDp;
  out.value_cap = V;
  out.truncated = rate.p > 0.0;
  const double width = out.truncated ? truncation_width(rate, V, static_cast<double>(k)) : 0.0;
  out.width_ok = width <= width_target;

  std::vector<double> probs;
  for (Term v = 0; v <= V; ++v) probs.push_back(term_prob(rate, v));
  std::vector<Term> tuple(k, 0);
  // Neumaier summation: up to 5e7 tiny terms.
  double sum = 0.0, comp = 0.0;
  while (true) {
    if (predicate(tuple)) {
      double w = 1.0;
      for (Term v : tuple) w *= probs[v];
      const double t = sum + w;
      comp += std::fabs(sum) >= std::fabs(w) ? (sum - t) + w : (w - t) + sum;
      sum = t;
    }
    std::size_t i = k;
    while (i > 0 && tuple[i - 1] == V) tuple[--i] = 0;
    if (i == 0) break;
    ++tuple[i - 1];
  }
  out.lo = std::clamp(sum + comp, 0.0, 1.0);
  out.hi = std::clamp(out.lo + width, 0.0, 1.0);
  return out;
}

}  // namespace compevo
