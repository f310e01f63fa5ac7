#include <sstream>

#include "doctest.h"

#include "compevo/commands.hpp"
#include "json.hpp"

using namespace compevo;
using namespace compevo::cli;
using nlohmann::json;

namespace {

const char* kReference50 = "0,0,2,3,1,0,1,5,0,0,0,3,2,0,1,1,2,2,2,0,4,3,0,0,4,4,4,4,1,0,3,1,5,1,6,3,3,0,1,0,0,0,0,1,0,1,1,2,1,2";

std::string theory(const std::string& q, std::vector<std::string> args, bool value_only = true) {
  std::ostringstream out;
  cmd_theory(q, args, value_only, out);
  return out.str();
}

}  // namespace

TEST_CASE("composition input") {
  CHECK(parse_composition("0120") == Composition{0, 1, 2, 0});
  CHECK(parse_composition(" 10, 0 ,3\n") == Composition{10, 0, 3});
  CHECK(parse_composition("7") == Composition{7});
  auto position = [](const char* text) -> long {
    try {
      parse_composition(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position("01a") == 2);
  CHECK(position("1,,2") == 2);
  CHECK(position("1,2,") == 4);
  CHECK(position("") == 0);
  CHECK(position("1 2,3") == 2);
}

TEST_CASE("stats report") {
  std::ostringstream out;
  cmd_stats(kReference50, out);
  const auto j = json::parse(out.str());
  CHECK(j["components"] == 10);
  CHECK(j["cmax"] == 7);
  CHECK(j["gaps"] == 10);
  CHECK(j["gmax"] == 4);
  CHECK(j["size"] == 80);
  CHECK(j["largest_square"] == 4);
  CHECK(j["squares"] == json{{"2", 2}, {"4", 1}});
  const auto z = json::parse(stats_json(parse_composition("0000")));
  CHECK(z["components"] == 0);
  CHECK(z["gaps"] == 1);
  CHECK(z["gmax"] == 4);
  const auto five = json::parse(stats_json(parse_composition("5")));
  CHECK(five["components"] == 1);
  CHECK(five["cmax"] == 1);
  CHECK(five["tmax"] == 5);
}

TEST_CASE("match report") {
  std::ostringstream out;
  MatchOptions o;
  o.collect_positions = true;
  cmd_match(kReference50, "o:[0,2,1,1]", o, out);
  const auto j = json::parse(out.str());
  CHECK(j["count"] == 1);
  CHECK(j["exists"] == true);
  CHECK(j["positions"] == json::array({json::array({34})}));
  CHECK(json::parse(match_json(parse_composition("000"), parse_pattern("o:[0,0,0]"), {}))["count"] == 1);
  CHECK_THROWS_AS(cmd_match("123", "o:[0,1],2", {}, out), GuardError);
  CHECK_THROWS_AS(cmd_match("123", "o:[0,2]", {}, out), ParseError);
}

TEST_CASE("theory command") {
  CHECK(theory("poisson", {"cmax_ge", "k=2", "alpha=1"}) == "0.632121\n");
  CHECK(theory("expected-components", {"n=100", "p=0.3"}) == "21.09\n");
  CHECK(theory("threshold", {"carlitz"}) == "q* = n^(-1)\n");
  const auto j = json::parse(theory("expected-gaps", {"n=10", "q=0.5"}, false));
  CHECK(j["value"].get<double>() == doctest::Approx(10 * 0.25 + 0.25));
  CHECK(j["exact"] == true);
  CHECK(theory("tmax-lt", {"n=3", "p=0.5", "r=1"}) == "0.125\n");
  CHECK_THROWS_AS(theory("expected-components", {"n=100"}), UsageError);
  CHECK_THROWS_AS(theory("expected-components", {"n=100", "p=0.3", "x=1"}), UsageError);
  CHECK_THROWS_AS(theory("nonsense", {}), UsageError);
  CHECK(json::parse(theory("list", {}, false))["poisson"].size() > 10);
}

TEST_CASE("sample command") {
  std::ostringstream a;
  SampleOptions o;
  o.model = make_uniform(5, 0);
  cmd_sample(o, a);
  CHECK(a.str() == "0,0,0,0,0\n");
  std::ostringstream b;
  o.model = make_geometric(4, 0.0);
  o.count = 2;
  o.format = SampleFormat::Digits;
  cmd_sample(o, b);
  CHECK(b.str() == "0000\n0000\n");
  o.model = make_geometric(30, 0.6);
  o.count = 50;
  o.format = SampleFormat::Json;
  std::ostringstream w1, w4;
  o.workers = 1;
  cmd_sample(o, w1);
  o.workers = 4;
  cmd_sample(o, w4);
  CHECK(w1.str() == w4.str());
  o.format = SampleFormat::Digits;
  o.model = make_uniform(2, 30);
  std::ostringstream bad;
  CHECK_THROWS_AS(cmd_sample(o, bad), UsageError);
}

TEST_CASE("rendering") {
  CHECK(render_ascii(parse_composition("012")) == "  #\n ##\n---\n");
  CHECK(render_ascii(parse_composition("0")) == "-\n");
  const auto svg = render_svg(parse_composition(kReference50));
  std::size_t bars = 0, pos = 0, tallest = 0;
  while ((pos = svg.find("class=\"bar\"", pos)) != std::string::npos) {
    ++bars;
    const auto h = svg.find("height=\"", pos) + 8;
    tallest = std::max<std::size_t>(tallest, std::stoul(svg.substr(h)));
    ++pos;
  }
  CHECK(bars == 50);
  CHECK(tallest == 6 * 12);
  CHECK(render_svg(parse_composition("0")).find("<line") != std::string::npos);
}

TEST_CASE("oracle command") {
  std::ostringstream out;
  cmd_oracle("uniform", {"n=4", "m=3"}, R"({"id":"cmax_ge","k":2})", 1e-9, out);
  CHECK(json::parse(out.str())["rational"] == "1/2");
  std::ostringstream count;
  cmd_oracle("count", {"n=3", "m=2"}, "", 1e-9, count);
  CHECK(json::parse(count.str())["count"] == "6");
  std::ostringstream g;
  CHECK_THROWS_AS(cmd_oracle("geometric", {"n=4", "p=0.2"}, R"({"id":"equal_terms","k":2})", 1e-9, g), GuardError);
}
