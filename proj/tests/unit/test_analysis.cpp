#include "doctest.h"

#include "compevo/analysis.hpp"
#include "support/brute.hpp"

using namespace compevo;

namespace {

const Composition kReference50{0, 0, 2, 3, 1, 0, 1, 5, 0, 0, 0, 3, 2, 0, 1, 1, 2, 2, 2, 0, 4, 3, 0, 0, 4,
                        4, 4, 4, 1, 0, 3, 1, 5, 1, 6, 3, 3, 0, 1, 0, 0, 0, 0, 1, 0, 1, 1, 2, 1, 2};

}  // namespace

TEST_CASE("reference composition statistics") {
  CHECK(kReference50.length() == 50);
  CHECK(kReference50.size() == 80);
  const RunReport comps = components(kReference50);
  const RunReport gs = gaps(kReference50);
  CHECK(comps.count() == 10);
  CHECK(gs.count() == 10);
  const Extremes e = extremes(kReference50);
  CHECK(e.cmax == 7);
  CHECK(e.cmin == 1);
  CHECK(e.gmax == 4);
  CHECK(e.gmin == 1);
  CHECK(e.tmax == 6);
  CHECK(e.tmin == 0);
  CHECK(comps.total_length() + gs.total_length() == 50);
  // The 4-square 4,4,4,4 and two 2-squares inside 2,2,2.
  const auto sq = square_counts(kReference50);
  CHECK(sq.size() == 2);
  CHECK(sq.at(4) == 1);
  CHECK(sq.at(2) == 2);
  CHECK(largest_square(kReference50) == 4);
  CHECK(square_counts(kReference50, true).at(1) == 12);
}

TEST_CASE("run positions are 1-based") {
  const Composition c{0, 2, 2, 0, 0, 1};
  const auto comps = components(c).runs;
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].start == 2);
  CHECK(comps[0].length == 2);
  CHECK(comps[1].start == 6);
  const auto eq = equal_runs(c, true).runs;
  REQUIRE(eq.size() == 2);
  CHECK(eq[0].value == 2);
  CHECK(eq[0].length == 2);
}

TEST_CASE("edge compositions") {
  CHECK(components(Composition::zeros(4)).count() == 0);
  CHECK(extremes(Composition::zeros(4)).gmax == 4);
  CHECK(extremes(Composition{5}).cmax == 1);
  CHECK(extremes(Composition{5}).gmax == 0);
  CHECK(is_carlitz(Composition{5}));
  CHECK(longest_equal_run(Composition::zeros(3), true) == 0);
  CHECK(longest_equal_run(Composition::zeros(3), false) == 3);
  CHECK(longest_increasing_run(Composition{0, 1, 2, 2, 3}) == 3);
  CHECK(max_multiplicity(Composition{1, 0, 1, 0, 1}) == 3);
}

TEST_CASE("statistics agree with brute force on every small composition") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (Term m = 0; m <= 8; ++m) {
      for (const auto& c : brute::all_compositions(n, m)) {
        const auto cl = brute::component_lengths(c);
        const auto gl = brute::gap_lengths(c);
        const Extremes e = extremes(c);
        REQUIRE(components(c).count() == cl.size());
        REQUIRE(gaps(c).count() == gl.size());
        REQUIRE(e.cmax == brute::max_or_zero(cl));
        REQUIRE(e.cmin == brute::min_or_zero(cl));
        REQUIRE(e.gmax == brute::max_or_zero(gl));
        REQUIRE(e.gmin == brute::min_or_zero(gl));
        REQUIRE(e.tmax == *std::max_element(c.vec().begin(), c.vec().end()));
        REQUIRE(e.tmin == *std::min_element(c.vec().begin(), c.vec().end()));
        REQUIRE(square_counts(c) == brute::squares(c));
        const auto sq = brute::squares(c);
        REQUIRE(largest_square(c) == (sq.empty() ? 0 : sq.rbegin()->first));
        REQUIRE(longest_increasing_run(c) == brute::longest_increasing_run(c));
        REQUIRE(longest_equal_run(c, true) == brute::longest_equal_run(c, true));
        REQUIRE(longest_equal_run(c, false) == brute::longest_equal_run(c, false));
        REQUIRE(is_carlitz(c) == brute::is_carlitz(c));
        REQUIRE(max_multiplicity(c) == brute::max_multiplicity(c));
      }
    }
  }
}
