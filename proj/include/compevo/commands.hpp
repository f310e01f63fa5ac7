// The command layer behind the compevo executable. Each command writes its
// output to a stream and throws UsageError (exit 1) or GuardError (exit 2);
// the executable only parses flags. Keeping the commands in the library lets
// tests drive them in-process.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compevo/core.hpp"
#include "compevo/patterns.hpp"

namespace compevo::cli {

// Compositions on the command line: comma-separated terms, or a digit string
// such as "0120" when every term is a single digit. Whitespace around terms
// is ignored. Errors carry the 1-based character position.
Composition parse_composition(std::string_view text);

// "key=value" arguments. Duplicate or malformed keys raise UsageError.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::vector<std::string>& args);

std::uint64_t parse_u64(const std::string& text, const std::string& name);
double parse_real(const std::string& text, const std::string& name);

// Model from {n, m} (uniform) or {n, p | q} (geometric).
ModelParams parse_model(bool uniform, const KeyValues& kv);

// Default seed: $COMPEVO_SEED when set, else 0.
std::uint64_t default_seed();

enum class SampleFormat { Csv, Digits, Json };
SampleFormat parse_sample_format(const std::string& text);
enum class UniformSampler { Bars, Chain };

std::string format_composition(const Composition& c, SampleFormat format);

struct SampleOptions {
  ModelParams model;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  SampleFormat format = SampleFormat::Csv;
  UniformSampler sampler = UniformSampler::Bars;
  int workers = 0;
};

// Composition i is drawn from substream i of RngStream(seed), so the output
// does not depend on the worker count.
void cmd_sample(const SampleOptions& options, std::ostream& out);

// JSON report, schema "compevo.stats/1".
std::string stats_json(const Composition& c);
void cmd_stats(std::string_view composition, std::ostream& out);

// JSON MatchReport, schema "compevo.match/1".
std::string match_json(const Composition& c, const PatternSpec& pattern, const MatchOptions& options);
void cmd_match(std::string_view composition, std::string_view pattern, const MatchOptions& options,
               std::ostream& out);

// `theory <quantity> key=value...`. With value_only the bare value (or the
// threshold formula) is printed with six significant digits.
void cmd_theory(const std::string& quantity, const std::vector<std::string>& args, bool value_only,
                std::ostream& out);

void cmd_sweep(std::string_view config_json, std::optional<int> workers_override, std::ostream& out);

enum class RenderFormat { Ascii, Svg };
RenderFormat parse_render_format(const std::string& text);
std::string render_ascii(const Composition& c);
std::string render_svg(const Composition& c);
void cmd_render(std::string_view composition, RenderFormat format, std::ostream& out);

// `oracle uniform n= m=`, `oracle geometric n= p=|q=`, `oracle count n= m=`.
// The property is a JSON object ({"id":..} or {"pattern":..}) or empty for count.
void cmd_oracle(const std::string& model, const std::vector<std::string>& args,
                const std::string& property_json, double width_target, std::ostream& out);

}  // namespace compevo::cli
