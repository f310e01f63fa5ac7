// Domain types shared by every compevo module: compositions, model
// parameters, parsed patterns and Monte Carlo estimates. No I/O, no
// randomness.
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace compevo {

using Term = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;

// Raised for malformed input or violated preconditions (CLI exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an enumeration/search guard is exceeded or a request is not
// supported by the selected algorithm (CLI exit code 2).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An n-term weak composition: a nonempty sequence of nonnegative terms.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<Term> terms);
  Composition(std::initializer_list<Term> terms);

  // All-zero composition 0^n.
  static Composition zeros(std::size_t n);

  std::size_t length() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Term operator[](std::size_t i) const { return terms_[i]; }
  // 1-based access, matching the C(i) convention used in reports.
  Term at1(std::size_t i) const { return terms_.at(i - 1); }
  std::span<const Term> terms() const { return terms_; }
  const std::vector<Term>& vec() const { return terms_; }

  // Sum of all terms.
  Term size() const;

  // C^{+j} for 0-based j; returns a new value.
  Composition incremented(std::size_t j) const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<Term> terms_;
};

Term composition_size(const Composition& c);

// binom(m+n-1, m), exact. n = 0 is accepted and yields [m == 0].
BigInt count_compositions(std::uint64_t n, std::uint64_t m);

// Geometric term law P(k) = q p^k. Both p and q are stored so callers can
// work near p = 1 (q ~ 1e-9) without cancellation.
struct GeometricRate {
  double p = 0.0;
  double q = 1.0;

  static GeometricRate from_p(double p);
  static GeometricRate from_q(double q);

  // log p computed as log1p(-q); -inf when p == 0.
  double log_p() const;
  // log q computed as log1p(-p).
  double log_q() const;
};

struct UniformModel {
  std::uint64_t n = 1;
  std::uint64_t m = 0;
};

struct GeometricModel {
  std::uint64_t n = 1;
  GeometricRate rate;

  // Mean size n p / q.
  double mean_size() const;
};

using ModelParams = std::variant<UniformModel, GeometricModel>;

UniformModel make_uniform(std::uint64_t n, std::uint64_t m);
GeometricModel make_geometric(std::uint64_t n, double p);
GeometricModel make_geometric_q(std::uint64_t n, double q);

std::uint64_t model_length(const ModelParams& model);
std::string describe(const ModelParams& model);

enum class PatternKind { Exact, Upper, Lower, Ordering };
enum class PatternStructure { Consecutive, Vincular, Nonconsecutive };

char kind_letter(PatternKind kind);
std::string to_string(PatternKind kind);
std::string to_string(PatternStructure structure);

// A parsed pattern: kind plus a sequence of blocks. Terms inside a block
// must occur consecutively; distinct blocks occur in order.
class PatternSpec {
 public:
  PatternSpec() = default;
  PatternSpec(PatternKind kind, std::vector<std::vector<Term>> blocks);

  PatternKind kind() const { return kind_; }
  const std::vector<std::vector<Term>>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  // Total number of terms k.
  std::size_t length() const;
  // Sum of all terms |pi|.
  Term size() const;
  // All terms flattened in order.
  std::vector<Term> flat() const;
  Term max_term() const;

  PatternStructure structure() const;
  bool is_consecutive() const { return blocks_.size() == 1; }
  bool all_singletons() const;

  // Canonical DSL text, e.g. "e:[1,2],0,4,[0,0,3]".
  std::string to_string() const;

 private:
  PatternKind kind_ = PatternKind::Exact;
  std::vector<std::vector<Term>> blocks_;
};

struct EstimateResult {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

}  // namespace compevo
