#include <sstream>

#include "doctest.h"

#include "compevo/sweep.hpp"

using namespace compevo;

namespace {

std::string run(const std::string& json, int workers) {
  SweepConfig cfg = parse_sweep_config(json);
  cfg.workers = workers;
  std::ostringstream out;
  write_sweep(out, cfg, run_sweep(cfg));
  return out.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

const char* kOracleSweep = R"({
  "schema": "compevo.sweep/1",
  "model": "geometric",
  "grid": {"points": [{"n": 50, "p": 0.2}, {"n": 50, "p": 0.5}, {"n": 50, "q": 0.05}]},
  "property": {"id": "cmax_ge", "k": 3},
  "theory": "oracle",
  "trials": 20000,
  "seed": 11
})";

}  // namespace

TEST_CASE("probability sweep with oracle theory") {
  const auto out = lines(run(kOracleSweep, 2));
  REQUIRE(out.size() == 4);
  CHECK(out[0] == "n,m_or_p,trials,p_hat,ci_low,ci_high,theory,abs_diff,seconds");
  const auto rows = run_sweep(parse_sweep_config(kOracleSweep));
  for (const auto& r : rows) {
    REQUIRE(r.theory);
    const double se = std::sqrt(*r.theory * (1 - *r.theory) / 20000.0);
    CHECK(*r.abs_diff <= 4 * se + 1e-12);
    CHECK(*r.abs_diff == std::fabs(r.estimate.point - *r.theory));
    CHECK_FALSE(r.seconds.has_value());
  }
  CHECK(out[1].rfind("50,0.20000000000000001,20000,", 0) == 0);
  CHECK(out[1].substr(out[1].size() - 3) == ",NA");
}

TEST_CASE("sweep output does not depend on the worker count") {
  const auto one = run(kOracleSweep, 1);
  CHECK(run(kOracleSweep, 3) == one);
  CHECK(run(kOracleSweep, 8) == one);
}

TEST_CASE("uniform parametric grid") {
  const auto cfg = parse_sweep_config(R"({
    "schema": "compevo.sweep/1", "model": "uniform",
    "grid": {"parametric": {"param": "m", "n": 100, "exponent": [0.5, 1.0]}},
    "property": {"pattern": "u:[1,1]"}, "theory": "oracle", "trials": 100, "seed": 1})");
  REQUIRE(cfg.points.size() == 2);
  CHECK(std::get<UniformModel>(cfg.points[0].model).m == 10);
  CHECK(std::get<UniformModel>(cfg.points[1].model).m == 100);
}

TEST_CASE("regime grid and Poisson fit") {
  const std::string json = R"({
    "schema": "compevo.sweep/1", "model": "geometric",
    "grid": {"regime": {"n": 400, "alpha": [0.5, 1, 2]}},
    "statistic": "cmax_ge", "params": {"k": 2},
    "theory": "poisson", "mode": "poisson_fit", "trials": 4000, "seed": 5})";
  const auto cfg = parse_sweep_config(json);
  REQUIRE(cfg.points.size() == 3);
  CHECK(std::get<GeometricModel>(cfg.points[1].model).rate.p == doctest::Approx(0.05));
  CHECK(cfg.property.describe() == "cmax_ge(k=2)");
  const auto rows = run_sweep(cfg);
  for (const auto& r : rows) {
    REQUIRE(r.poisson_mean);
    CHECK(*r.theory == doctest::Approx(std::exp(-*r.poisson_mean)));
    CHECK(*r.tv_distance < 0.1);
  }
  const auto out = lines(run(json, 1));
  CHECK(out[0] ==
        "n,m_or_p,trials,p_zero_hat,ci_low,ci_high,poisson_mean,p_zero_theory,abs_diff,tv_distance,seconds");
}

TEST_CASE("jsonl output and timing") {
  SweepConfig cfg = parse_sweep_config(R"({
    "schema": "compevo.sweep/1", "model": "uniform", "grid": {"points": [{"n": 5, "m": 5}]},
    "property": {"id": "carlitz", "negate": true}, "trials": 10, "format": "jsonl",
    "record_timing": true, "workers": "auto"})");
  std::ostringstream out;
  write_sweep(out, cfg, run_sweep(cfg));
  const auto l = lines(out.str());
  REQUIRE(l.size() == 1);
  CHECK(l[0].find("\"schema\":\"compevo.sweep/1\"") != std::string::npos);
  CHECK(l[0].find("\"property\":\"not carlitz\"") != std::string::npos);
  CHECK(l[0].find("\"seconds\":null") == std::string::npos);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_sweep_config("{"), UsageError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"grid": {"points": [{"n": 5, "p": 0.1}]}, "property": {"id": "carlitz"}})"),
                  UsageError);
  const std::string head = R"({"schema": "compevo.sweep/1", )";
  CHECK_THROWS_AS(parse_sweep_config(head + R"("grid": {"points": []}, "property": {"id": "carlitz"}})"), UsageError);
  CHECK_THROWS_AS(parse_sweep_config(head + R"("grid": {"points": [{"n": 5, "p": 0.1}]}, "property": {"id": "carlitz"}, "trials": 0})"),
                  UsageError);
  CHECK_THROWS_AS(parse_sweep_config(head + R"("grid": {"regime": {"n": 5, "alpha": 1}}, "statistic": "nope"})"), UsageError);
  CHECK_THROWS_AS(parse_sweep_config(head + R"("grid": {"points": [{"n": 5, "p": 0.1}]}, "property": {"id": "bogus"}})"),
                  UsageError);
  CHECK_THROWS_AS(parse_sweep_config(head + R"("grid": {"points": [{"n": 5, "p": 0.1}]}, "property": {"id": "carlitz"}, "workers": 0})"),
                  UsageError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "NA");
}
