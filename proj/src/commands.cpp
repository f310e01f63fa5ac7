#include "compevo/commands.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "compevo/analysis.hpp"
#include "compevo/oracle.hpp"
#include "compevo/properties.hpp"
#include "compevo/rng.hpp"
#include "compevo/samplers.hpp"
#include "compevo/sweep.hpp"
#include "compevo/theory.hpp"

namespace compevo::cli {

namespace {

using ojson = nlohmann::ordered_json;

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void composition_error(const std::string& what, std::size_t offset) {
  throw ParseError("composition: " + what + " at position " + std::to_string(offset + 1), offset);
}

const std::string& require(const KeyValues& kv, const std::string& key, const std::string& who) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw UsageError(who + " needs " + key + "=");
  return it->second;
}

void reject_unknown(const KeyValues& kv, std::initializer_list<const char*> allowed,
                    const std::string& who) {
  for (const auto& [key, value] : kv) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw UsageError(who + ": unknown parameter " + key + "=");
    }
  }
}

GeometricRate parse_rate(const KeyValues& kv, const std::string& who) {
  const bool has_p = kv.count("p") != 0;
  const bool has_q = kv.count("q") != 0;
  if (has_p == has_q) throw UsageError(who + " needs exactly one of p= or q=");
  return has_p ? GeometricRate::from_p(parse_real(kv.at("p"), "p"))
               : GeometricRate::from_q(parse_real(kv.at("q"), "q"));
}

std::uint64_t get_n(const KeyValues& kv, const std::string& who) {
  const auto n = parse_u64(require(kv, "n", who), "n");
  if (n == 0) throw UsageError("n must be >= 1");
  return n;
}

TheoryParams theory_params(const KeyValues& kv) {
  TheoryParams p;
  if (kv.count("k")) p.k = parse_u64(kv.at("k"), "k");
  if (kv.count("r")) p.r = parse_u64(kv.at("r"), "r");
  if (kv.count("c")) p.c = parse_real(kv.at("c"), "c");
  if (kv.count("p")) p.p = parse_real(kv.at("p"), "p");
  if (kv.count("pattern")) p.pattern = parse_pattern(kv.at("pattern"));
  return p;
}

std::string six_digits(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ojson prediction_json(const std::string& quantity, const TheoryPrediction& t) {
  ojson j;
  j["schema"] = "compevo.theory/1";
  j["quantity"] = quantity;
  j["value"] = t.value;
  j["kind"] = to_string(t.kind);
  j["regime"] = t.regime;
  j["exact"] = t.exact;
  return j;
}

void emit_prediction(const std::string& quantity, const TheoryPrediction& t, bool value_only,
                     std::ostream& out) {
  if (value_only) {
    out << six_digits(t.value) << '\n';
  } else {
    out << prediction_json(quantity, t).dump() << '\n';
  }
}

ojson exact_json(const ExactProbability& e) {
  ojson j;
  j["schema"] = "compevo.oracle/1";
  j["method"] = to_string(e.method);
  j["rational"] = e.rational ? ojson(e.rational->str()) : ojson(nullptr);
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["value_cap"] = e.value_cap;
  j["truncated"] = e.truncated;
  j["width_ok"] = e.width_ok;
  return j;
}

}  // namespace

Composition parse_composition(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) throw ParseError("composition: empty input", 0);
  const std::size_t base = static_cast<std::size_t>(body.data() - text.data());
  std::vector<Term> terms;
  if (body.find(',') == std::string_view::npos) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      const char ch = body[i];
      if (ch < '0' || ch > '9') composition_error(std::string("unexpected '") + ch + "'", base + i);
      terms.push_back(static_cast<Term>(ch - '0'));
    }
    return Composition(std::move(terms));
  }
  std::size_t i = 0;
  while (true) {
    while (i < body.size() && is_space(body[i])) ++i;
    if (i >= body.size() || body[i] < '0' || body[i] > '9') composition_error("expected a term", base + i);
    Term value = 0;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') {
      const Term digit = static_cast<Term>(body[i] - '0');
      if (value > (std::numeric_limits<Term>::max() - digit) / 10) composition_error("term overflows", base + i);
      value = value * 10 + digit;
      ++i;
    }
    terms.push_back(value);
    while (i < body.size() && is_space(body[i])) ++i;
    if (i == body.size()) break;
    if (body[i] != ',') composition_error(std::string("unexpected '") + body[i] + "'", base + i);
    ++i;
  }
  return Composition(std::move(terms));
}

KeyValues parse_key_values(const std::vector<std::string>& args) {
  KeyValues kv;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + arg + "'");
    const auto key = arg.substr(0, eq);
    if (!kv.emplace(key, arg.substr(eq + 1)).second) throw UsageError("duplicate parameter " + key + "=");
  }
  return kv;
}

std::uint64_t parse_u64(const std::string& text, const std::string& name) {
  if (text.empty() || text[0] == '-' || text[0] == '+') {
    throw UsageError(name + " must be a nonnegative integer, got '" + text + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno == 0 && end && *end == '\0') return v;
  // Allow integral values written as reals, e.g. n=2e4.
  const double d = parse_real(text, name);
  if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  throw UsageError(name + " must be a nonnegative integer, got '" + text + "'");
}

double parse_real(const std::string& text, const std::string& name) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || errno != 0 || !end || *end != '\0' || !std::isfinite(v)) {
    throw UsageError(name + " must be a real number, got '" + text + "'");
  }
  return v;
}

ModelParams parse_model(bool uniform, const KeyValues& kv) {
  if (uniform) {
    reject_unknown(kv, {"n", "m"}, "uniform model");
    return make_uniform(get_n(kv, "uniform model"), parse_u64(require(kv, "m", "uniform model"), "m"));
  }
  reject_unknown(kv, {"n", "p", "q"}, "geometric model");
  return GeometricModel{get_n(kv, "geometric model"), parse_rate(kv, "geometric model")};
}

std::uint64_t default_seed() {
  const char* env = std::getenv("COMPEVO_SEED");
  if (!env || !*env) return 0;
  return parse_u64(env, "COMPEVO_SEED");
}

SampleFormat parse_sample_format(const std::string& text) {
  if (text == "csv") return SampleFormat::Csv;
  if (text == "digits") return SampleFormat::Digits;
  if (text == "json" || text == "json-array") return SampleFormat::Json;
  throw UsageError("unknown format " + text + " (expected csv, digits or json)");
}

std::string format_composition(const Composition& c, SampleFormat format) {
  std::string s;
  if (format == SampleFormat::Json) s += '[';
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (format == SampleFormat::Digits) {
      if (c[i] > 9) throw UsageError("digits format needs every term <= 9, got " + std::to_string(c[i]));
      s += static_cast<char>('0' + c[i]);
      continue;
    }
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  if (format == SampleFormat::Json) s += ']';
  return s;
}

void cmd_sample(const SampleOptions& options, std::ostream& out) {
  const RngStream root(options.seed, 0);
  std::vector<Composition> batch;
  // Batches bound memory for large counts; composition i always uses substream i.
  constexpr std::uint64_t kBatch = 4096;
  const int threads = options.workers > 0 ? options.workers : 0;
  for (std::uint64_t first = 0; first < options.count; first += kBatch) {
    const auto size = static_cast<std::int64_t>(std::min(kBatch, options.count - first));
    batch.assign(static_cast<std::size_t>(size), Composition());
    const auto* uniform = std::get_if<UniformModel>(&options.model);
    const bool chain = uniform && options.sampler == UniformSampler::Chain;
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1) if (threads != 1)
    for (std::int64_t i = 0; i < size; ++i) {
      RngStream rng = root.substream(first + static_cast<std::uint64_t>(i));
      batch[i] = chain ? sample_uniform_chain(uniform->n, uniform->m, rng) : sample(options.model, rng);
    }
    for (const auto& c : batch) out << format_composition(c, options.format) << '\n';
  }
}

std::string stats_json(const Composition& c) {
  const Extremes e = extremes(c);
  ojson j;
  j["schema"] = "compevo.stats/1";
  j["n"] = c.length();
  j["size"] = c.size();
  j["components"] = components(c).count();
  j["gaps"] = gaps(c).count();
  j["cmax"] = e.cmax;
  j["cmin"] = e.cmin;
  j["gmax"] = e.gmax;
  j["gmin"] = e.gmin;
  j["tmax"] = e.tmax;
  j["tmin"] = e.tmin;
  j["largest_square"] = largest_square(c);
  ojson squares = ojson::object();
  for (const auto& [side, count] : square_counts(c)) squares[std::to_string(side)] = count;
  j["squares"] = squares;
  j["longest_increasing_run"] = longest_increasing_run(c);
  j["is_carlitz"] = is_carlitz(c);
  j["max_multiplicity"] = max_multiplicity(c);
  return j.dump();
}

void cmd_stats(std::string_view composition, std::ostream& out) {
  out << stats_json(parse_composition(composition)) << '\n';
}

std::string match_json(const Composition& c, const PatternSpec& pattern, const MatchOptions& options) {
  const MatchReport r = match(c, pattern, options);
  ojson j;
  j["schema"] = "compevo.match/1";
  j["pattern"] = pattern.to_string();
  j["structure"] = to_string(pattern.structure());
  j["gap"] = options.gap == GapRule::Strict ? "strict" : "adjacent";
  j["exists"] = r.exists;
  j["count"] = r.count;
  j["truncated"] = r.truncated;
  if (options.collect_positions) j["positions"] = r.positions;
  return j.dump();
}

void cmd_match(std::string_view composition, std::string_view pattern, const MatchOptions& options,
               std::ostream& out) {
  const Composition c = parse_composition(composition);
  out << match_json(c, parse_pattern(pattern), options) << '\n';
}

void cmd_theory(const std::string& quantity, const std::vector<std::string>& args, bool value_only,
                std::ostream& out) {
  const std::string who = "theory " + quantity;

  if (quantity == "list") {
    ojson j;
    j["schema"] = "compevo.theory-list/1";
    auto rows = [](const std::vector<StatisticInfo>& infos) {
      ojson a = ojson::array();
      for (const auto& s : infos) a.push_back({{"id", s.id}, {"needs", s.needs}, {"description", s.description}});
      return a;
    };
    j["poisson"] = rows(poisson_statistics());
    j["threshold"] = rows(threshold_statistics());
    out << j.dump(2) << '\n';
    return;
  }

  if (quantity == "poisson" || quantity == "threshold") {
    if (args.empty()) throw UsageError(who + " needs a statistic id");
    const std::string id = args[0];
    const KeyValues kv = parse_key_values({args.begin() + 1, args.end()});
    reject_unknown(kv, {"k", "r", "c", "p", "pattern", "alpha", "n"}, who);
    const TheoryParams params = theory_params(kv);
    if (quantity == "poisson") {
      const double alpha = kv.count("alpha") ? parse_real(kv.at("alpha"), "alpha") : 1.0;
      const PoissonLimit lim = poisson_limit(id, params, alpha);
      if (value_only) {
        out << six_digits(lim.probability.value) << '\n';
        return;
      }
      ojson j = prediction_json("poisson " + id, lim.probability);
      j["property"] = lim.property;
      j["alpha"] = alpha;
      j["poisson_mean"] = lim.mean;
      j["p_zero"] = lim.p_zero;
      j["p_positive"] = lim.p_positive;
      if (kv.count("n")) {
        const auto rate = regime_rate(id, params, alpha, parse_u64(kv.at("n"), "n"));
        if (rate) {
          j["p_at_n"] = rate->p;
          j["q_at_n"] = rate->q;
        }
      }
      out << j.dump() << '\n';
      return;
    }
    std::optional<std::uint64_t> n;
    if (kv.count("n")) n = parse_u64(kv.at("n"), "n");
    const ThresholdLocation t = threshold_location(id, params, n);
    if (value_only) {
      out << t.formula << '\n';
      return;
    }
    ojson j;
    j["schema"] = "compevo.theory/1";
    j["quantity"] = "threshold " + id;
    j["kind"] = to_string(PredictionKind::ThresholdLocation);
    j["parameter"] = t.parameter;
    j["exponent"] = t.exponent;
    j["m_exponent"] = t.m_exponent;
    j["formula"] = t.formula;
    j["m_formula"] = t.m_formula;
    j["value"] = t.value ? ojson(*t.value) : ojson(nullptr);
    j["m_value"] = t.m_value ? ojson(*t.m_value) : ojson(nullptr);
    out << j.dump() << '\n';
    return;
  }

  const KeyValues kv = parse_key_values(args);
  auto pattern = [&] { return parse_pattern(require(kv, "pattern", who)); };

  if (quantity == "expected-components" || quantity == "expected-gaps" ||
      quantity == "mean-component-length" || quantity == "mean-gap-length") {
    reject_unknown(kv, {"n", "p", "q"}, who);
    const auto n = get_n(kv, who);
    const auto rate = parse_rate(kv, who);
    const TheoryPrediction t = quantity == "expected-components" ? expected_components(n, rate)
                               : quantity == "expected-gaps"     ? expected_gaps(n, rate)
                               : quantity == "mean-component-length" ? mean_component_length(n, rate)
                                                                     : mean_gap_length(n, rate);
    emit_prediction(quantity, t, value_only, out);
  } else if (quantity == "exact-at-position") {
    reject_unknown(kv, {"pattern", "p", "q"}, who);
    emit_prediction(quantity, prob_exact_consecutive_at_position(pattern(), parse_rate(kv, who)),
                    value_only, out);
  } else if (quantity == "exact-at-position-uniform") {
    reject_unknown(kv, {"pattern", "n", "m"}, who);
    emit_prediction(quantity,
                    prob_exact_consecutive_at_position_uniform(
                        get_n(kv, who), parse_u64(require(kv, "m", who), "m"), pattern()),
                    value_only, out);
  } else if (quantity == "expected-exact") {
    reject_unknown(kv, {"pattern", "n", "p", "q"}, who);
    emit_prediction(quantity, expected_exact_occurrences(get_n(kv, who), pattern(), parse_rate(kv, who)),
                    value_only, out);
  } else if (quantity == "argmax-p") {
    reject_unknown(kv, {"pattern"}, who);
    TheoryPrediction t;
    t.value = argmax_p_exact(pattern());
    t.kind = PredictionKind::ThresholdLocation;
    t.regime = "p maximising the expected occurrence count";
    emit_prediction(quantity, t, value_only, out);
  } else if (quantity == "upper-at-position" || quantity == "lower-at-position" ||
             quantity == "ordering-at-position") {
    reject_unknown(kv, {"pattern", "p", "q"}, who);
    const auto rate = parse_rate(kv, who);
    const auto spec = pattern();
    emit_prediction(quantity,
                    quantity == "upper-at-position"   ? prob_upper_at_position(spec, rate)
                    : quantity == "lower-at-position" ? prob_lower_at_position(spec, rate)
                                                      : prob_ordering_at_position(spec, rate),
                    value_only, out);
  } else if (quantity == "equal-run-at-position") {
    reject_unknown(kv, {"k", "p", "q"}, who);
    emit_prediction(quantity,
                    prob_equal_nonzero_run_at_position(parse_u64(require(kv, "k", who), "k"),
                                                       parse_rate(kv, who)),
                    value_only, out);
  } else if (quantity == "tmax-lt" || quantity == "tmin-ge") {
    reject_unknown(kv, {"n", "r", "p", "q"}, who);
    const auto n = get_n(kv, who);
    const auto r = parse_u64(require(kv, "r", who), "r");
    const auto rate = parse_rate(kv, who);
    emit_prediction(quantity, quantity == "tmax-lt" ? prob_tmax_lt(n, rate, r) : prob_tmin_ge(n, rate, r),
                    value_only, out);
  } else if (quantity == "square") {
    reject_unknown(kv, {"n", "c", "theta"}, who);
    const SquareHeuristic h = square_heuristic(get_n(kv, who), parse_real(require(kv, "c", who), "c"),
                                               parse_real(require(kv, "theta", who), "theta"));
    if (value_only) {
      out << six_digits(h.k_star) << '\n';
      return;
    }
    ojson j;
    j["schema"] = "compevo.theory/1";
    j["quantity"] = quantity;
    j["k_star"] = h.k_star;
    j["q"] = h.q;
    j["log_expected"] = h.log_expected;
    j["log_ratio"] = h.log_ratio;
    out << j.dump() << '\n';
  } else if (quantity == "square-moments") {
    reject_unknown(kv, {"n", "k", "p", "q"}, who);
    const auto n = get_n(kv, who);
    const auto k = parse_u64(require(kv, "k", who), "k");
    const auto rate = parse_rate(kv, who);
    ojson j;
    j["schema"] = "compevo.theory/1";
    j["quantity"] = quantity;
    j["log_expected"] = square_log_expected(n, k, rate);
    j["log_ratio"] = square_log_ratio(n, k, rate);
    out << j.dump() << '\n';
  } else {
    throw UsageError("unknown theory quantity '" + quantity + "' (try `theory list`)");
  }
}

void cmd_sweep(std::string_view config_json, std::optional<int> workers_override, std::ostream& out) {
  SweepConfig cfg = parse_sweep_config(config_json);
  if (workers_override) cfg.workers = *workers_override;
  write_sweep(out, cfg, run_sweep(cfg));
}

RenderFormat parse_render_format(const std::string& text) {
  if (text == "ascii") return RenderFormat::Ascii;
  if (text == "svg") return RenderFormat::Svg;
  throw UsageError("unknown render format " + text + " (expected ascii or svg)");
}

std::string render_ascii(const Composition& c) {
  Term top = 0;
  for (auto v : c.terms()) top = std::max(top, v);
  std::string s;
  for (Term row = top; row >= 1; --row) {
    for (auto v : c.terms()) s += v >= row ? '#' : ' ';
    s += '\n';
  }
  s.append(c.length(), '-');
  s += '\n';
  return s;
}

std::string render_svg(const Composition& c) {
  constexpr int kCol = 12;
  constexpr int kUnit = 12;
  constexpr int kPad = 4;
  Term top = 0;
  for (auto v : c.terms()) top = std::max(top, v);
  const auto width = static_cast<unsigned long long>(c.length()) * kCol + 2 * kPad;
  const auto height = static_cast<unsigned long long>(top) * kUnit + 2 * kPad;
  const auto base = height - kPad;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (std::size_t i = 0; i < c.length(); ++i) {
    const auto h = static_cast<unsigned long long>(c[i]) * kUnit;
    s << "  <rect class=\"bar\" x=\"" << kPad + i * kCol << "\" y=\"" << base - h << "\" width=\"" << kCol
      << "\" height=\"" << h << "\" fill=\"#4a6fa5\" stroke=\"#ffffff\"/>\n";
  }
  s << "  <line x1=\"" << kPad << "\" y1=\"" << base << "\" x2=\"" << width - kPad << "\" y2=\"" << base
    << "\" stroke=\"#000000\"/>\n";
  s << "</svg>\n";
  return s.str();
}

void cmd_render(std::string_view composition, RenderFormat format, std::ostream& out) {
  const Composition c = parse_composition(composition);
  out << (format == RenderFormat::Ascii ? render_ascii(c) : render_svg(c));
}

void cmd_oracle(const std::string& model, const std::vector<std::string>& args,
                const std::string& property_json, double width_target, std::ostream& out) {
  const KeyValues kv = parse_key_values(args);
  if (model == "count") {
    reject_unknown(kv, {"n", "m"}, "oracle count");
    const BigInt count = count_compositions(get_n(kv, "oracle count"),
                                            parse_u64(require(kv, "m", "oracle count"), "m"));
    ojson j;
    j["schema"] = "compevo.oracle/1";
    j["count"] = count.str();
    out << j.dump() << '\n';
    return;
  }
  if (model != "uniform" && model != "geometric") {
    throw UsageError("oracle model must be uniform, geometric or count");
  }
  if (property_json.empty()) throw UsageError("oracle needs --property or --pattern");
  const Property property = parse_property_json(property_json);
  const ModelParams params = parse_model(model == "uniform", kv);
  ExactProbability e;
  if (const auto* u = std::get_if<UniformModel>(&params)) {
    e = exact_prob_uniform(u->n, u->m, property);
  } else {
    const auto& g = std::get<GeometricModel>(params);
    DpOptions opts;
    opts.width_target = width_target;
    e = exact_prob_geometric(g.n, g.rate, property, opts);
  }
  ojson j = exact_json(e);
  j["property"] = property.describe();
  j["model"] = describe(params);
  out << j.dump() << '\n';
}

}  // namespace compevo::cli
