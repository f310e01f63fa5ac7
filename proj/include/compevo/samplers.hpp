// Random compositions under the uniform model C(n,m), the evolutionary
// Polya-urn chain C_t, the geometric model C(n,p), and the increment law
// that couples C(n,p1) to C(n,p2).
//
// Every sampler is a pure function of its RngStream; use one stream per
// thread.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/rng.hpp"

namespace compevo {

// One geometric term, P(k) = q p^k, by inverse CDF floor(log U / log p).
Term geometric_term(const GeometricRate& rate, RngStream& rng);

Composition sample_geometric(const GeometricModel& model, RngStream& rng);
// In-place variant: resizes `out` to n and overwrites it.
void sample_geometric_into(std::vector<Term>& out, const GeometricModel& model, RngStream& rng);

// Uniform over all binom(m+n-1, m) compositions via a uniform subset of
// bar (or star) positions among m+n-1 slots.
Composition sample_uniform_bars(std::uint64_t n, std::uint64_t m, RngStream& rng);
void sample_uniform_bars_into(std::vector<Term>& out, std::uint64_t n, std::uint64_t m,
                              RngStream& rng);

// Runs the evolutionary chain m steps from 0^n.
Composition sample_uniform_chain(std::uint64_t n, std::uint64_t m, RngStream& rng);

// One step of the chain: term j grows with probability (c(j)+1)/(n+t),
// t = |c|. O(n) since the composition carries no urn history.
Composition evolve_step(const Composition& c, RngStream& rng);
// In-place variant; returns the 0-based index that was incremented.
std::size_t evolve_step_inplace(std::vector<Term>& terms, Term size, RngStream& rng);

// Multicoloured Polya urn with O(1) steps: keeps the colour of every ball
// added so far, so drawing a uniform ball among n + t needs no search.
class PolyaUrn {
 public:
  explicit PolyaUrn(std::uint64_t n);

  // Adds one ball; returns the 0-based index of the term that grew.
  std::size_t step(RngStream& rng);
  std::uint64_t time() const { return history_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  Composition composition() const { return Composition(terms_); }

 private:
  std::vector<Term> terms_;
  std::vector<std::uint32_t> history_;
};

// n i.i.d. terms from the increment law: P(0) = q2/q1 and
// P(k) = (q2/q1)(1 - p1/p2) p2^k for k >= 1. Requires 0 <= p1 < p2 < 1.
Composition sample_bridge(std::uint64_t n, const GeometricRate& r1, const GeometricRate& r2,
                          RngStream& rng);
Composition sample_bridge(std::uint64_t n, double p1, double p2, RngStream& rng);

// Dispatch on the model variant (uniform uses the bars sampler).
Composition sample(const ModelParams& model, RngStream& rng);
void sample_into(std::vector<Term>& out, const ModelParams& model, RngStream& rng);

// Rejection sampler for C(n,p) conditioned on size m. Returns nullopt after
// max_attempts failures. Test-scale helper only.
std::optional<Composition> sample_geometric_conditioned(const GeometricModel& model,
                                                        std::uint64_t m, RngStream& rng,
                                                        std::uint64_t max_attempts = 100000000);

}  // namespace compevo
