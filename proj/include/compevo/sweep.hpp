// Config-driven Monte Carlo sweeps over a grid of model points.
//
// Config (JSON, schema "compevo.sweep/1"):
//
//   {
//     "schema": "compevo.sweep/1",
//     "model": "geometric" | "uniform",
//     "grid": { "points": [ {"n": 100, "p": 0.3}, {"n": 100, "q": 1e-4}, {"n": 50, "m": 20} ] }
//           | { "parametric": { "param": "m" | "p" | "q", "n": 10000 | [..],
//                               "alpha": 1 | [..], "exponent": [..] } }   value = alpha n^c
//           | { "regime": { "n": 20000 | [..], "alpha": [..] } }         needs "statistic"
//     "property": { "id": "cmax_ge", "k": 2 } | { "pattern": "u:[1,1]", "gap": "adjacent" },
//                 optional "negate": true
//     "statistic": "cmax_ge", "params": { "k": 2 },   Poisson row (regime grid / theory)
//     "theory": "none" | "poisson" | "oracle",
//     "mode": "probability" | "poisson_fit",
//     "trials": 10000, "seed": 1, "confidence": 0.95,
//     "interval": "wilson" | "clopper-pearson", "workers": 4 | "auto",
//     "format": "csv" | "jsonl", "record_timing": false
//   }
//
// Probability mode writes the columns
//   n,m_or_p,trials,p_hat,ci_low,ci_high,theory,abs_diff,seconds
// and poisson_fit mode writes
//   n,m_or_p,trials,p_zero_hat,ci_low,ci_high,poisson_mean,p_zero_theory,abs_diff,tv_distance,seconds
// Missing values are "NA"; seconds is "NA" unless record_timing is set, so
// the output is byte-stable for a fixed config and seed.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/properties.hpp"
#include "compevo/stats.hpp"
#include "compevo/theory.hpp"

namespace compevo {

inline constexpr const char* kSweepSchema = "compevo.sweep/1";

enum class TheorySource { None, Poisson, Oracle };
enum class SweepMode { Probability, PoissonFit };
enum class OutputFormat { Csv, Jsonl };

struct GridPoint {
  ModelParams model;
  std::optional<double> alpha;  // regime grids only
};

struct SweepConfig {
  std::vector<GridPoint> points;
  Property property = Property::statistic(PropertyKind::CmaxGe, 1);
  std::optional<std::string> statistic;
  TheoryParams statistic_params;
  TheorySource theory = TheorySource::None;
  SweepMode mode = SweepMode::Probability;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  IntervalKind interval = IntervalKind::Wilson;
  int workers = 0;  // 0 = auto
  OutputFormat format = OutputFormat::Csv;
  bool record_timing = false;
};

struct SweepRow {
  GridPoint point;
  EstimateResult estimate;
  std::optional<double> theory;
  std::optional<double> abs_diff;
  std::optional<double> poisson_mean;  // poisson_fit only
  std::optional<double> tv_distance;   // poisson_fit only
  std::optional<double> seconds;
};

// Throws UsageError on schema violations.
SweepConfig parse_sweep_config(std::string_view json_text);

// Property from a JSON object text such as {"id":"cmax_ge","k":2}.
Property parse_property_json(std::string_view json_text);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

std::string sweep_header(const SweepConfig& config);
void write_sweep(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows);

// Shared number formatting: "%.17g", integers without exponent.
std::string format_number(double x);

}  // namespace compevo
