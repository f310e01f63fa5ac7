// compevo: sample, analyse and match weak compositions; evaluate theory rows;
// run Monte Carlo sweeps; render bar charts; query the exact oracles.
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "compevo/commands.hpp"
#include "compevo/core.hpp"

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path);
  if (!in) throw compevo::UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Composition from the positional argument or, when absent, stdin.
std::string composition_arg(const std::string& value) {
  return value.empty() ? read_text("-") : value;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace compevo;
  CLI::App app{"Random weak compositions: sampling, statistics, patterns and thresholds"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw random compositions");
  bool uniform = false, geometric = false;
  std::vector<std::string> model_args;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  std::string format = "csv", sampler = "bars";
  int workers = 0;
  auto* uniform_flag = sample->add_flag("--uniform", uniform, "Uniform model C(n,m): n= m=");
  auto* geometric_flag = sample->add_flag("--geometric", geometric, "Geometric model C(n,p): n= p=|q=");
  uniform_flag->excludes(geometric_flag);
  sample->add_option("params", model_args, "Model parameters as key=value")->required();
  sample->add_option("--count", count, "Number of compositions")->check(CLI::PositiveNumber);
  auto* seed_opt = sample->add_option("--seed", seed, "Seed (default $COMPEVO_SEED or 0)");
  sample->add_option("--format", format, "csv | digits | json");
  sample->add_option("--sampler", sampler, "Uniform sampler: bars | chain");
  sample->add_option("--workers", workers, "Threads (0 = all)")->check(CLI::NonNegativeNumber);

  // stats
  auto* stats = app.add_subcommand("stats", "Statistics of one composition (JSON)");
  std::string composition;
  stats->add_option("composition", composition, "CSV or digit string; stdin when omitted");

  // match
  auto* match_cmd = app.add_subcommand("match", "Count pattern occurrences (JSON)");
  std::string pattern;
  bool strict = false, positions = false;
  std::size_t max_positions = 1000;
  match_cmd->add_option("composition", composition, "CSV or digit string")->required();
  match_cmd->add_option("pattern", pattern, "Pattern, e.g. e:[2,0,2] or u:[1][1]")->required();
  match_cmd->add_flag("--strict", strict, "Vincular blocks separated by at least one term");
  match_cmd->add_flag("--positions", positions, "List 1-based anchor tuples");
  match_cmd->add_option("--max-positions", max_positions, "Cap on listed anchors");

  // theory
  auto* theory = app.add_subcommand("theory", "Closed forms, Poisson limits and thresholds");
  std::string quantity;
  std::vector<std::string> theory_args;
  bool value_only = false;
  theory->add_option("quantity", quantity, "e.g. poisson, threshold, expected-components, list")->required();
  theory->add_option("args", theory_args, "Statistic id and key=value parameters");
  theory->add_flag("--value", value_only, "Print only the value (six digits) or formula");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep from a JSON config");
  std::string config_path;
  int sweep_workers = -1;
  sweep->add_option("config", config_path, "Config file, or - for stdin")->required();
  sweep->add_option("--workers", sweep_workers, "Override the config's worker count (0 = all)")
      ->check(CLI::NonNegativeNumber);

  // render
  auto* render = app.add_subcommand("render", "Bar chart of a composition");
  std::string render_format = "ascii";
  render->add_option("composition", composition, "CSV or digit string; stdin when omitted");
  render->add_option("--format", render_format, "ascii | svg");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact probabilities by enumeration or transfer DP");
  std::string oracle_model;
  std::vector<std::string> oracle_args;
  std::string property_json, oracle_pattern;
  double width = 1e-9;
  oracle->add_option("model", oracle_model, "uniform | geometric | count")->required();
  oracle->add_option("params", oracle_args, "n= m= | n= p=|q=");
  auto* prop_opt = oracle->add_option("--property", property_json, R"(JSON, e.g. {"id":"cmax_ge","k":2})");
  oracle->add_option("--pattern", oracle_pattern, "Shorthand for {\"pattern\": ...}")->excludes(prop_opt);
  oracle->add_flag("--strict", strict, "Strict vincular gaps for --pattern");
  oracle->add_option("--width", width, "Target interval width for the DP")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sample) {
      if (uniform == geometric) throw UsageError("sample needs --uniform or --geometric");
      cli::SampleOptions opts;
      opts.model = cli::parse_model(uniform, cli::parse_key_values(model_args));
      opts.count = count;
      opts.seed = *seed_opt ? seed : cli::default_seed();
      opts.format = cli::parse_sample_format(format);
      if (sampler == "bars") opts.sampler = cli::UniformSampler::Bars;
      else if (sampler == "chain") opts.sampler = cli::UniformSampler::Chain;
      else throw UsageError("sampler must be bars or chain");
      opts.workers = workers;
      cli::cmd_sample(opts, std::cout);
    } else if (*stats) {
      cli::cmd_stats(composition_arg(composition), std::cout);
    } else if (*match_cmd) {
      MatchOptions opts;
      opts.gap = strict ? GapRule::Strict : GapRule::Adjacent;
      opts.collect_positions = positions;
      opts.max_positions = max_positions;
      cli::cmd_match(composition, pattern, opts, std::cout);
    } else if (*theory) {
      cli::cmd_theory(quantity, theory_args, value_only, std::cout);
    } else if (*sweep) {
      std::optional<int> override;
      if (sweep_workers >= 0) override = sweep_workers;
      cli::cmd_sweep(read_text(config_path), override, std::cout);
    } else if (*render) {
      cli::cmd_render(composition_arg(composition), cli::parse_render_format(render_format), std::cout);
    } else if (*oracle) {
      if (!oracle_pattern.empty()) {
        property_json = std::string(R"({"pattern":")") + oracle_pattern + R"(","gap":")" +
                        (strict ? "strict" : "adjacent") + "\"}";
      }
      cli::cmd_oracle(oracle_model, oracle_args, property_json, width, std::cout);
    }
  } catch (const GuardError& e) {
    std::cout.flush();
    std::cerr << "compevo: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cout.flush();
    std::cerr << "compevo: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
