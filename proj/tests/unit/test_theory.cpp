#include <cmath>

#include "doctest.h"

#include "compevo/analysis.hpp"
#include "compevo/patterns.hpp"
#include "compevo/theory.hpp"
#include "support/brute.hpp"

using namespace compevo;

namespace {

// E[f] under C(n,p) by summing over [0, cap]^n.
double brute_expectation(std::size_t n, double p, Term cap, const std::function<double(const Composition&)>& f) {
  std::vector<Term> t(n, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    for (auto v : t) prob *= brute::geometric_pmf(p, v);
    total += prob * f(Composition(t));
    std::size_t i = 0;
    while (i < n && t[i] == cap) t[i++] = 0;
    if (i == n) break;
    ++t[i];
  }
  return total;
}

TheoryParams with_k(std::uint64_t k) {
  TheoryParams t;
  t.k = k;
  return t;
}

}  // namespace

TEST_CASE("component and gap expectations against enumeration") {
  for (double p : {0.1, 0.3, 0.5}) {
    const auto rate = GeometricRate::from_p(p);
    const std::size_t n = 4;
    const Term cap = p < 0.4 ? 24 : 40;
    const double ec = brute_expectation(n, p, cap, [](const Composition& c) { return double(components(c).count()); });
    const double eg = brute_expectation(n, p, cap, [](const Composition& c) { return double(gaps(c).count()); });
    CHECK(expected_components(n, rate).value == doctest::Approx(ec).epsilon(1e-9));
    CHECK(expected_gaps(n, rate).value == doctest::Approx(eg).epsilon(1e-9));
    // Mean length is the ratio of the expected number of nonzero terms to the
    // expected number of components.
    CHECK(mean_component_length(n, rate).value == doctest::Approx(n * p / ec).epsilon(1e-9));
    CHECK(mean_gap_length(n, rate).value == doctest::Approx(n * (1 - p) / eg).epsilon(1e-9));
  }
  CHECK(expected_components(100, GeometricRate::from_p(0.3)).value == doctest::Approx(21.09));
  CHECK_THROWS_AS(mean_component_length(5, GeometricRate::from_p(0.0)), UsageError);
}

TEST_CASE("per-position probabilities against window enumeration") {
  const double p = 0.4;
  const auto rate = GeometricRate::from_p(p);
  auto window_prob = [&](const char* pattern) {
    const auto spec = parse_pattern(pattern);
    return brute::geometric_probability(spec.length(), p, 45, [&](const Composition& c) {
      return brute::count_occurrences(c, spec, false) > 0;
    });
  };
  for (const char* pat : {"e:[2,0,2]", "e:[1]", "e:[0,0,3,1]"}) {
    CHECK(prob_exact_consecutive_at_position(parse_pattern(pat), rate).value ==
          doctest::Approx(window_prob(pat)).epsilon(1e-12));
  }
  for (const char* pat : {"u:[1,1]", "u:[3,0,2]"}) {
    CHECK(prob_upper_at_position(parse_pattern(pat), rate).value == doctest::Approx(window_prob(pat)).epsilon(1e-12));
  }
  for (const char* pat : {"l:[0,1,0]", "l:[2,3]"}) {
    CHECK(prob_lower_at_position(parse_pattern(pat), rate).value == doctest::Approx(window_prob(pat)).epsilon(1e-12));
  }
  for (const char* pat : {"o:[0,1,2]", "o:[0,2,1,1]", "o:[1,0,1]", "o:[0,0]"}) {
    CHECK(prob_ordering_at_position(parse_pattern(pat), rate).value == doctest::Approx(window_prob(pat)).epsilon(1e-12));
  }
  for (std::uint64_t k : {1, 2, 3}) {
    const double expected = brute::geometric_probability(k, p, 45, [](const Composition& c) {
      return c[0] != 0 && brute::longest_equal_run(c, true) == c.length();
    });
    CHECK(prob_equal_nonzero_run_at_position(k, rate).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("extreme terms against enumeration") {
  const auto rate = GeometricRate::from_p(0.5);
  for (std::uint64_t r : {1, 2, 3}) {
    const double lt = brute::geometric_probability(3, 0.5, 45, [&](const Composition& c) {
      return *std::max_element(c.vec().begin(), c.vec().end()) < r;
    });
    const double ge = brute::geometric_probability(3, 0.5, 45, [&](const Composition& c) {
      return *std::min_element(c.vec().begin(), c.vec().end()) >= r;
    });
    CHECK(prob_tmax_lt(3, rate, r).value == doctest::Approx(lt).epsilon(1e-12));
    CHECK(prob_tmin_ge(3, rate, r).value == doctest::Approx(ge).epsilon(1e-12));
  }
}

TEST_CASE("uniform-model exact pattern probability") {
  for (std::size_t n = 3; n <= 6; ++n) {
    for (Term m = 0; m <= 6; ++m) {
      for (const char* pat : {"e:[1,0]", "e:[2,0,2]", "e:[0]"}) {
        const auto spec = parse_pattern(pat);
        const auto all = brute::all_compositions(n, m);
        double hits = 0;
        for (const auto& c : all) {
          bool first = true;
          for (std::size_t j = 0; j < spec.length(); ++j) first = first && c[j] == spec.flat()[j];
          hits += first;
        }
        CHECK(prob_exact_consecutive_at_position_uniform(n, m, spec).value ==
              doctest::Approx(hits / all.size()).epsilon(1e-12));
      }
    }
  }
  // The large-size path (log-gamma) agrees with the exact one at the switch.
  const auto spec = parse_pattern("e:[1,2]");
  const double exact = prob_exact_consecutive_at_position_uniform(1000, 2999, spec).value;
  const double approx = prob_exact_consecutive_at_position_uniform(1000, 3001, spec).value;
  CHECK(approx == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("expected occurrences peak at p = k/(k+s)") {
  const auto spec = parse_pattern("e:[2,0,2]");
  const double star = argmax_p_exact(spec);
  CHECK(star == doctest::Approx(4.0 / 7.0));
  double best_p = 0, best = -1;
  for (int i = 1; i < 10000; ++i) {
    const double p = i / 10000.0;
    const double v = expected_exact_occurrences(50, spec, GeometricRate::from_p(p)).value;
    if (v > best) best = v, best_p = p;
  }
  CHECK(best_p == doctest::Approx(star).epsilon(1e-3));
}

TEST_CASE("Poisson limits") {
  CHECK(poisson_limit("cmax_ge", with_k(2), 1.0).probability.value == doctest::Approx(1 - std::exp(-1.0)));
  CHECK(poisson_limit("cmax_ge", with_k(3), 0.5).mean == doctest::Approx(0.125));
  CHECK(poisson_limit("cmin_gt", with_k(1), 1.0).probability.value == doctest::Approx(std::exp(-1.0)));
  CHECK(poisson_limit("cmin_gt", with_k(3), 0.5).mean == doctest::Approx(0.75));
  CHECK(poisson_limit("equal_terms", with_k(2), 1.0).mean == doctest::Approx(0.25));
  // The property is "some value repeats", the complement of all-distinct.
  CHECK(poisson_limit("equal_terms", with_k(2), 1.0).probability.value == doctest::Approx(1 - std::exp(-0.25)));
  CHECK(poisson_limit("equal_terms", with_k(2), 1.0).p_zero == doctest::Approx(std::exp(-0.25)));
  CHECK(poisson_limit("equal_terms", with_k(3), 2.0).mean == doctest::Approx(4.0 / 18.0));
  CHECK(poisson_limit("carlitz", {}, 1.0).mean == doctest::Approx(0.5));
  CHECK(poisson_limit("equal_run_disappear", with_k(3), 2.0).mean == doctest::Approx(4.0 / 3.0));
  CHECK(poisson_limit("increasing_run", with_k(3), 2.0).mean == doctest::Approx(8.0));
  TheoryParams lower;
  lower.pattern = parse_pattern("l:[0,1]");
  CHECK(poisson_limit("lower_disappear", lower, 1.5).mean == doctest::Approx(1.5 * 1.5 * 2.0));
  TheoryParams ord;
  ord.pattern = parse_pattern("o:[0,1,1]");
  // Multiplicities (1, 2): d = 1 and lambda = (1 + 2) * 2 = 6.
  CHECK(poisson_limit("ordering_disappear", ord, 1.0).mean == doctest::Approx(1.0 / 6.0));
  CHECK(poisson_limit("ordering_disappear", ord, 2.0).mean == doctest::Approx(2.0 / 6.0));
  TheoryParams two;
  two.c = 0.5;
  CHECK(poisson_limit("tmax_two_point", two, 1.0).mean == doctest::Approx(std::exp(-0.5)));
  TheoryParams tmin;
  tmin.r = 3;
  CHECK(poisson_limit("tmin_ge", tmin, 0.5).mean == doctest::Approx(1.5));
  CHECK_THROWS_AS(poisson_limit("nope", {}, 1.0), UsageError);
  CHECK_THROWS_AS(poisson_limit("cmax_ge", {}, 1.0), UsageError);
  CHECK_THROWS_AS(poisson_limit("cmax_ge", with_k(2), 0.0), UsageError);
}

TEST_CASE("regime rates") {
  const auto r = regime_rate("cmax_ge", with_k(2), 1.0, 20000);
  REQUIRE(r);
  CHECK(r->p == doctest::Approx(1.0 / std::sqrt(20000.0)));
  const auto q = regime_rate("equal_terms", with_k(2), 1.0, 20000);
  REQUIRE(q);
  CHECK(q->q == doctest::Approx(1.0 / (20000.0 * 20000.0)));
  TheoryParams two;
  two.c = 0.0;
  CHECK_FALSE(regime_rate("tmax_two_point", two, 1.0, 100).has_value());
}

TEST_CASE("threshold locations") {
  CHECK(threshold_location("carlitz", {}).formula == "q* = n^(-1)");
  CHECK(threshold_location("cmax_ge", with_k(2)).formula == "p* = n^(-1/2)");
  CHECK(threshold_location("cmax_ge", with_k(2)).m_formula == "m* = n^(1/2)");
  CHECK(threshold_location("equal_terms", with_k(2)).formula == "q* = n^(-2)");
  CHECK(threshold_location("increasing_run", with_k(3)).formula == "p* = n^(-1/3)");
  TheoryParams v;
  v.pattern = parse_pattern("e:[1,2],0,4,[0,0,3]");
  // Appearance at n^(-1/s) with s the largest block size (4); disappearance
  // at n^(-1/l) with l the longest block length (3).
  CHECK(threshold_location("exact_appear", v).formula == "p* = n^(-1/4)");
  CHECK(threshold_location("exact_disappear", v).formula == "q* = n^(-1/3)");
  const auto at = threshold_location("cmax_ge", with_k(2), 10000);
  REQUIRE(at.value);
  CHECK(*at.value == doctest::Approx(0.01));
  CHECK(*at.m_value == doctest::Approx(10000 * 0.01 / 0.99));
}

TEST_CASE("square heuristic moments") {
  const std::uint64_t n = 1000000;
  const auto rate = GeometricRate::from_q(0.2);
  const double k = 4;
  CHECK(square_log_expected(n, 4, rate) ==
        doctest::Approx(std::log(n + 1.0 - k) + k * std::log(0.2) + k * k * std::log(0.8)));
  CHECK(square_log_ratio(n, 4, rate) ==
        doctest::Approx(-std::log(double(n)) + (1 - k) * std::log(0.2) + (k - k * k) * std::log(0.8)));
  const auto h = square_heuristic(n, 0.0, 1.0);
  const double ll = std::log(std::log(double(n)));
  CHECK(h.k_star == doctest::Approx(std::log(double(n)) / ll));
  CHECK(h.q == doctest::Approx(ll / std::log(double(n))));
}
