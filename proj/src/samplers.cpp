#include "compevo/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace compevo {

namespace {

constexpr double kMaxTerm = 9.2e18;  // just below 2^63

// Draws a uniform k-subset of {0, ..., N-1} (Floyd), returned sorted.
std::vector<std::uint64_t> floyd_subset(std::uint64_t N, std::uint64_t k, RngStream& rng) {
  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  if (k == 0) return chosen;
  if (k == N) {
    for (std::uint64_t i = 0; i < N; ++i) chosen.push_back(i);
    return chosen;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(k * 2);
  for (std::uint64_t j = N - k; j < N; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = seen.insert(t).second ? t : j;
    if (pick == j) seen.insert(j);
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

Term geometric_term(const GeometricRate& rate, RngStream& rng) {
  if (rate.p == 0.0) return 0;
  const double x = std::floor(std::log(rng.uniform_open01()) / rate.log_p());
  if (!(x < kMaxTerm)) return static_cast<Term>(kMaxTerm);
  return static_cast<Term>(x);
}

void sample_geometric_into(std::vector<Term>& out, const GeometricModel& model, RngStream& rng) {
  out.resize(model.n);
  if (model.rate.p == 0.0) {
    std::fill(out.begin(), out.end(), Term{0});
    return;
  }
  const double inv_log_p = 1.0 / model.rate.log_p();
  for (auto& term : out) {
    const double x = std::floor(std::log(rng.uniform_open01()) * inv_log_p);
    term = x < kMaxTerm ? static_cast<Term>(x) : static_cast<Term>(kMaxTerm);
  }
}

Composition sample_geometric(const GeometricModel& model, RngStream& rng) {
  std::vector<Term> terms;
  sample_geometric_into(terms, model, rng);
  return Composition(std::move(terms));
}

void sample_uniform_bars_into(std::vector<Term>& out, std::uint64_t n, std::uint64_t m,
                              RngStream& rng) {
  if (n == 0) throw UsageError("uniform model needs n >= 1");
  out.assign(n, 0);
  if (n == 1) {
    out[0] = m;
    return;
  }
  const std::uint64_t slots = m + n - 1;
  if (n - 1 <= m) {
    // Choose the n-1 bar slots; term i is the gap between bars i-1 and i.
    const auto bars = floyd_subset(slots, n - 1, rng);
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < bars.size(); ++i) {
      out[i] = bars[i] - prev;
      prev = bars[i] + 1;
    }
    out[n - 1] = slots - prev;
  } else {
    // Fewer stars than bars: choose the m star slots; a star at slot s with
    // rank r has s - r bars before it, which is its term index.
    const auto stars = floyd_subset(slots, m, rng);
    for (std::size_t r = 0; r < stars.size(); ++r) out[stars[r] - r] += 1;
  }
}

Composition sample_uniform_bars(std::uint64_t n, std::uint64_t m, RngStream& rng) {
  std::vector<Term> terms;
  sample_uniform_bars_into(terms, n, m, rng);
  return Composition(std::move(terms));
}

PolyaUrn::PolyaUrn(std::uint64_t n) : terms_(n, 0) {
  if (n == 0) throw UsageError("urn needs n >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw UsageError("urn: n too large");
}

std::size_t PolyaUrn::step(RngStream& rng) {
  const std::uint64_t n = terms_.size();
  const std::uint64_t u = rng.below(n + history_.size());
  const std::size_t j = u < n ? static_cast<std::size_t>(u) : history_[u - n];
  terms_[j] += 1;
  history_.push_back(static_cast<std::uint32_t>(j));
  return j;
}

Composition sample_uniform_chain(std::uint64_t n, std::uint64_t m, RngStream& rng) {
  PolyaUrn urn(n);
  for (std::uint64_t t = 0; t < m; ++t) urn.step(rng);
  return urn.composition();
}

std::size_t evolve_step_inplace(std::vector<Term>& terms, Term size, RngStream& rng) {
  const std::uint64_t n = terms.size();
  std::uint64_t u = rng.below(n + size);
  // Weight of index j is terms[j] + 1; walk the cumulative sum.
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const std::uint64_t w = terms[j] + 1;
    if (u < w) {
      terms[j] += 1;
      return j;
    }
    u -= w;
  }
  // Unreachable when size == sum(terms).
  throw UsageError("evolve_step: size does not match the terms");
}

Composition evolve_step(const Composition& c, RngStream& rng) {
  auto terms = c.vec();
  evolve_step_inplace(terms, c.size(), rng);
  return Composition(std::move(terms));
}

Composition sample_bridge(std::uint64_t n, const GeometricRate& r1, const GeometricRate& r2,
                          RngStream& rng) {
  if (n == 0) throw UsageError("bridge needs n >= 1");
  if (!(r1.p < r2.p)) throw UsageError("bridge needs p1 < p2");
  // P(0) = q2/q1; conditioned on k >= 1 the law is 1 + Geometric(p2).
  const double zero_prob = r2.q / r1.q;
  std::vector<Term> terms(n, 0);
  for (auto& term : terms) {
    if (rng.uniform01() < zero_prob) continue;
    term = 1 + geometric_term(r2, rng);
  }
  return Composition(std::move(terms));
}

Composition sample_bridge(std::uint64_t n, double p1, double p2, RngStream& rng) {
  return sample_bridge(n, GeometricRate::from_p(p1), GeometricRate::from_p(p2), rng);
}

void sample_into(std::vector<Term>& out, const ModelParams& model, RngStream& rng) {
  if (const auto* u = std::get_if<UniformModel>(&model)) {
    sample_uniform_bars_into(out, u->n, u->m, rng);
  } else {
    sample_geometric_into(out, std::get<GeometricModel>(model), rng);
  }
}

Composition sample(const ModelParams& model, RngStream& rng) {
  std::vector<Term> terms;
  sample_into(terms, model, rng);
  return Composition(std::move(terms));
}

std::optional<Composition> sample_geometric_conditioned(const GeometricModel& model,
                                                        std::uint64_t m, RngStream& rng,
                                                        std::uint64_t max_attempts) {
  std::vector<Term> terms;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    sample_geometric_into(terms, model, rng);
    Term s = 0;
    for (Term t : terms) s += t;
    if (s == m) return Composition(terms);
  }
  return std::nullopt;
}

}  // namespace compevo
