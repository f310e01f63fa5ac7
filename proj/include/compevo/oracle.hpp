// Exact ground truth at small scale.
//
// Uniform model: full enumeration of the n-compositions of m in
// lexicographic order, giving exact rationals.
//
// Geometric model: a dynamic program over positions x automaton states. The
// property is turned into a deterministic recognizer over term values. If
// the recognizer cannot tell apart values above some cap T, the alphabet
// {0, ..., T, >T} is finite and the DP is exact. Otherwise values are
// truncated at V: a term above V sends the run to a sink, and the result is
// the interval [P(property, no term > V), that + P(some term > V)], whose
// width is 1 - (1 - p^(V+1))^n <= n p^(V+1).
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "compevo/core.hpp"
#include "compevo/properties.hpp"

namespace compevo {

using Rational = boost::multiprecision::cpp_rational;

constexpr std::uint64_t kEnumerationGuard = 10'000'000;

enum class OracleMethod { Enumeration, TransferDp };

struct ExactProbability {
  OracleMethod method = OracleMethod::Enumeration;
  std::optional<Rational> rational;  // enumeration only
  double lo = 0.0;
  double hi = 0.0;
  // Largest term value represented individually; 0 for enumeration.
  Term value_cap = 0;
  // True when values were cut at value_cap (interval may have width > 0).
  bool truncated = false;
  // False when the requested width could not be reached within the caps.
  bool width_ok = true;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

std::string to_string(OracleMethod method);

// Visits every n-composition of m exactly once in lexicographic order
// (0,...,0,m) first, (m,0,...,0) last. Returns the number visited.
// Throws GuardError when binom(m+n-1, m) > guard.
std::uint64_t enumerate_uniform(std::uint64_t n, std::uint64_t m,
                                const std::function<void(const Composition&)>& visit,
                                std::uint64_t guard = kEnumerationGuard);

ExactProbability exact_prob_uniform(std::uint64_t n, std::uint64_t m,
                                    const std::function<bool(const Composition&)>& predicate,
                                    std::uint64_t guard = kEnumerationGuard);
ExactProbability exact_prob_uniform(std::uint64_t n, std::uint64_t m, const Property& property,
                                    std::uint64_t guard = kEnumerationGuard);

// Deterministic recognizer over term values. States are small integer
// vectors; the DP interns them.
using AutomatonState = std::vector<std::int64_t>;

class Recognizer {
 public:
  virtual ~Recognizer() = default;
  // Values above this cap are indistinguishable to the recognizer; nullopt
  // when every value matters.
  virtual std::optional<Term> equivalence_cap() const = 0;
  virtual AutomatonState initial() const = 0;
  // Consumes one term. `emitted` receives the number of occurrences of the
  // counted event that complete at this term.
  virtual AutomatonState step(const AutomatonState& state, Term value,
                              std::uint64_t& emitted) const = 0;
  virtual bool accepts(const AutomatonState& state) const = 0;
};

// Throws GuardError for properties that no finite automaton recognizes
// (nonconsecutive ordering patterns, equal terms anywhere, vincular patterns
// with ordering kind).
std::unique_ptr<Recognizer> make_recognizer(const Property& property);

struct DpOptions {
  double width_target = 1e-9;
  Term max_value_cap = 4096;
  std::size_t max_states = 200'000;
};

ExactProbability exact_prob_geometric(std::uint64_t n, const GeometricRate& rate,
                                      const Property& property, const DpOptions& options = {});
ExactProbability exact_prob_geometric(std::uint64_t n, const GeometricRate& rate,
                                      const Recognizer& recognizer, const DpOptions& options = {});

// Expected number of events counted by the recognizer (exact recognizers
// only; throws GuardError otherwise).
double expected_count_geometric(std::uint64_t n, const GeometricRate& rate,
                                const Recognizer& recognizer, const DpOptions& options = {});

// Built-in counters for expectation checks.
std::unique_ptr<Recognizer> component_counter();
std::unique_ptr<Recognizer> gap_counter();
std::unique_ptr<Recognizer> nonzero_counter();

// P(property and size = m) for C(n,p), by a DP that also tracks the size.
// Exact up to floating point; m bounds the alphabet so nothing is truncated.
double exact_prob_geometric_joint_size(std::uint64_t n, const GeometricRate& rate, std::uint64_t m,
                                       const Property& property, const DpOptions& options = {});

// Negative binomial P(|C(n,p)| = m) = binom(m+n-1, m) p^m q^n, in log space.
double prob_size_geometric(std::uint64_t n, const GeometricRate& rate, std::uint64_t m);

// P(a window of k i.i.d. terms satisfies predicate), enumerating all value
// tuples in [0, V]^k; the interval accounts for tuples with a term > V.
ExactProbability exact_window_probability(std::size_t k, const GeometricRate& rate,
                                          const std::function<bool(std::span<const Term>)>& predicate,
                                          double width_target = 1e-9,
                                          std::uint64_t max_tuples = 50'000'000);

}  // namespace compevo
