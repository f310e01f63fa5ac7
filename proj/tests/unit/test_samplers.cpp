#include <map>

#include "doctest.h"

#include "compevo/samplers.hpp"
#include "compevo/stats.hpp"
#include "support/brute.hpp"

using namespace compevo;

namespace {

// Chi-square p-value of draws against the uniform law on all n-compositions of m.
double uniformity_p_value(std::size_t n, Term m, int draws,
                          const std::function<Composition(RngStream&)>& draw) {
  const auto support = brute::all_compositions(n, m);
  std::map<Composition, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i) index[support[i]] = i;
  std::vector<std::uint64_t> hist(support.size(), 0);
  const RngStream root(77, n * 100 + m);
  for (int t = 0; t < draws; ++t) {
    RngStream rng = root.substream(t);
    const Composition c = draw(rng);
    REQUIRE(index.count(c) == 1);
    hist[index[c]] += 1;
  }
  const std::vector<double> probs(support.size(), 1.0 / support.size());
  return chi_square_gof(hist, probs).p_value;
}

}  // namespace

TEST_CASE("geometric terms follow q p^k") {
  for (double p : {0.1, 0.5, 0.9}) {
    const auto rate = GeometricRate::from_p(p);
    std::vector<std::uint64_t> hist(400, 0);
    RngStream rng(3, 0);
    for (int i = 0; i < 50000; ++i) {
      const Term v = geometric_term(rate, rng);
      hist[std::min<Term>(v, 399)] += 1;
    }
    std::vector<double> probs(400);
    for (int k = 0; k < 399; ++k) probs[k] = brute::geometric_pmf(p, k);
    probs[399] = std::pow(p, 399);
    CHECK(chi_square_gof(hist, probs).p_value > 1e-4);
  }
}

TEST_CASE("degenerate parameters") {
  RngStream rng(0, 0);
  CHECK(sample_geometric(make_geometric(5, 0.0), rng) == Composition::zeros(5));
  CHECK(sample_uniform_bars(4, 0, rng) == Composition::zeros(4));
  CHECK(sample_uniform_chain(3, 0, rng) == Composition::zeros(3));
  CHECK(sample_uniform_bars(1, 9, rng) == Composition{9});
  // q near zero: terms are huge but finite.
  const auto c = sample_geometric(make_geometric_q(3, 1e-9), rng);
  CHECK(c.size() > 1000);
}

TEST_CASE("both uniform samplers are uniform on small supports") {
  for (auto [n, m] : {std::pair<std::size_t, Term>{3, 2}, {4, 3}, {2, 5}, {3, 4}}) {
    CAPTURE(n);
    CAPTURE(m);
    CHECK(uniformity_p_value(n, m, 20000, [n = n, m = m](RngStream& r) { return sample_uniform_bars(n, m, r); }) > 1e-4);
    CHECK(uniformity_p_value(n, m, 20000, [n = n, m = m](RngStream& r) { return sample_uniform_chain(n, m, r); }) > 1e-4);
    CHECK(uniformity_p_value(n, m, 20000, [n = n, m = m](RngStream& r) {
            PolyaUrn urn(n);
            for (Term t = 0; t < m; ++t) urn.step(r);
            return urn.composition();
          }) > 1e-4);
  }
}

TEST_CASE("one chain step picks term j with weight c(j)+1") {
  const Composition c{0, 3, 1};  // weights 1, 4, 2 out of 7
  std::vector<std::uint64_t> hist(3, 0);
  RngStream rng(5, 1);
  for (int i = 0; i < 35000; ++i) {
    const Composition next = evolve_step(c, rng);
    CHECK(next.size() == 5);
    for (std::size_t j = 0; j < 3; ++j) {
      if (next[j] == c[j] + 1) hist[j] += 1;
    }
  }
  CHECK(chi_square_gof(hist, {1.0 / 7, 4.0 / 7, 2.0 / 7}).p_value > 1e-4);
}

TEST_CASE("bridge law and the coupling identity") {
  const double p1 = 0.2, p2 = 0.5;
  const auto r1 = GeometricRate::from_p(p1), r2 = GeometricRate::from_p(p2);
  RngStream rng(11, 0);
  std::vector<std::uint64_t> bridge(60, 0), sum(60, 0);
  for (int i = 0; i < 40000; ++i) {
    const Term b = sample_bridge(1, r1, r2, rng)[0];
    bridge[std::min<Term>(b, 59)] += 1;
    const Term g = sample_geometric(GeometricModel{1, r1}, rng)[0];
    sum[std::min<Term>(b + g, 59)] += 1;
  }
  std::vector<double> law(60), target(60);
  for (int k = 0; k < 59; ++k) {
    law[k] = k == 0 ? 0.5 / 0.8 : (0.5 / 0.8) * (1 - p1 / p2) * std::pow(p2, k);
    target[k] = brute::geometric_pmf(p2, k);
  }
  law[59] = 0.0;
  target[59] = std::pow(p2, 59);
  CHECK(chi_square_gof(bridge, law).p_value > 1e-4);
  CHECK(chi_square_gof(sum, target).p_value > 1e-4);
  CHECK_THROWS_AS(sample_bridge(1, 0.5, 0.2, rng), UsageError);
}

TEST_CASE("geometric conditioned on its size is uniform") {
  const auto model = make_geometric(3, 0.5);
  const double p = uniformity_p_value(3, 4, 15000, [&](RngStream& r) {
    auto c = sample_geometric_conditioned(model, 4, r);
    REQUIRE(c.has_value());
    return *c;
  });
  CHECK(p > 1e-4);
  RngStream rng(1, 1);
  CHECK_FALSE(sample_geometric_conditioned(make_geometric(50, 0.01), 1000, rng, 10).has_value());
}

TEST_CASE("model dispatch") {
  RngStream a(4, 4), b(4, 4);
  CHECK(sample(ModelParams{make_uniform(6, 9)}, a) == sample_uniform_bars(6, 9, b));
  CHECK(sample(ModelParams{make_uniform(6, 9)}, a).size() == 9);
}
