#include "compevo/sweep.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "compevo/montecarlo.hpp"
#include "compevo/oracle.hpp"
#include "compevo/patterns.hpp"

namespace compevo {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw UsageError("sweep config: " + what);
}

std::vector<json> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<json>>();
  return {v};
}

std::uint64_t get_u64(const json& v, const std::string& name) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  schema_error(name + " must be a nonnegative integer");
}

double get_double(const json& v, const std::string& name) {
  if (!v.is_number()) schema_error(name + " must be a number");
  return v.get<double>();
}

TheoryParams parse_params(const json& obj) {
  TheoryParams p;
  if (!obj.is_object()) schema_error("params must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "k") p.k = get_u64(value, "k");
    else if (key == "r") p.r = get_u64(value, "r");
    else if (key == "c") p.c = get_double(value, "c");
    else if (key == "p") p.p = get_double(value, "p");
    else if (key == "pattern") {
      if (!value.is_string()) schema_error("pattern must be a string");
      p.pattern = parse_pattern(value.get<std::string>());
    }
  }
  return p;
}

GapRule parse_gap(const json& obj) {
  if (!obj.contains("gap")) return GapRule::Adjacent;
  const auto g = obj.at("gap").get<std::string>();
  if (g == "adjacent") return GapRule::Adjacent;
  if (g == "strict") return GapRule::Strict;
  schema_error("gap must be \"adjacent\" or \"strict\"");
}

Property parse_property_object(const json& obj) {
  if (!obj.is_object()) schema_error("property must be an object");
  Property prop = Property::statistic(PropertyKind::CmaxGe, 1);
  if (obj.contains("pattern") && !obj.contains("id")) {
    prop = Property::contains(parse_pattern(obj.at("pattern").get<std::string>()), parse_gap(obj));
  } else if (obj.contains("id")) {
    prop = make_property(obj.at("id").get<std::string>(), parse_params(obj), parse_gap(obj));
  } else {
    schema_error("property needs \"id\" or \"pattern\"");
  }
  if (obj.contains("negate") && obj.at("negate").get<bool>()) prop = prop.negate();
  return prop;
}

GridPoint point_from_rate(bool uniform, std::uint64_t n, const GeometricRate& rate,
                          std::optional<double> alpha) {
  if (uniform) {
    // Transfer m = n p / q.
    const double m = std::round(static_cast<double>(n) * rate.p / rate.q);
    if (!(m >= 0.0 && m < 9.2e18)) schema_error("transferred m out of range");
    return GridPoint{make_uniform(n, static_cast<std::uint64_t>(m)), alpha};
  }
  return GridPoint{GeometricModel{n, rate}, alpha};
}

std::vector<GridPoint> parse_grid(const json& grid, bool uniform, const SweepConfig& cfg) {
  std::vector<GridPoint> points;
  if (!grid.is_object()) schema_error("grid must be an object");
  if (grid.contains("points")) {
    for (const auto& pt : as_list(grid.at("points"))) {
      if (!pt.contains("n")) schema_error("grid point needs n");
      const auto n = get_u64(pt.at("n"), "n");
      if (n == 0) schema_error("n must be >= 1");
      if (uniform) {
        if (!pt.contains("m")) schema_error("uniform grid point needs m");
        points.push_back(GridPoint{make_uniform(n, get_u64(pt.at("m"), "m")), std::nullopt});
      } else if (pt.contains("p")) {
        points.push_back(GridPoint{make_geometric(n, get_double(pt.at("p"), "p")), std::nullopt});
      } else if (pt.contains("q")) {
        points.push_back(GridPoint{make_geometric_q(n, get_double(pt.at("q"), "q")), std::nullopt});
      } else {
        schema_error("geometric grid point needs p or q");
      }
    }
  } else if (grid.contains("parametric")) {
    const auto& par = grid.at("parametric");
    const std::string param = par.value("param", uniform ? "m" : "p");
    if (uniform != (param == "m")) schema_error("parametric param must be m for uniform, p or q for geometric");
    if (!par.contains("n") || !par.contains("exponent")) schema_error("parametric grid needs n and exponent");
    const auto alphas = par.contains("alpha") ? as_list(par.at("alpha")) : std::vector<json>{json(1.0)};
    for (const auto& nv : as_list(par.at("n"))) {
      const auto n = get_u64(nv, "n");
      if (n == 0) schema_error("n must be >= 1");
      for (const auto& av : alphas) {
        const double alpha = get_double(av, "alpha");
        for (const auto& cv : as_list(par.at("exponent"))) {
          const double value = alpha * std::pow(static_cast<double>(n), get_double(cv, "exponent"));
          if (param == "m") {
            points.push_back(GridPoint{make_uniform(n, static_cast<std::uint64_t>(std::llround(value))),
                                       std::nullopt});
          } else if (param == "p") {
            points.push_back(GridPoint{make_geometric(n, value), std::nullopt});
          } else if (param == "q") {
            points.push_back(GridPoint{make_geometric_q(n, value), std::nullopt});
          } else {
            schema_error("parametric param must be m, p or q");
          }
        }
      }
    }
  } else if (grid.contains("regime")) {
    if (!cfg.statistic) schema_error("regime grid needs \"statistic\"");
    const auto& reg = grid.at("regime");
    if (!reg.contains("n") || !reg.contains("alpha")) schema_error("regime grid needs n and alpha");
    for (const auto& nv : as_list(reg.at("n"))) {
      const auto n = get_u64(nv, "n");
      if (n == 0) schema_error("n must be >= 1");
      for (const auto& av : as_list(reg.at("alpha"))) {
        const double alpha = get_double(av, "alpha");
        const auto rate = regime_rate(*cfg.statistic, cfg.statistic_params, alpha, n);
        if (!rate) schema_error("statistic " + *cfg.statistic + " has no p/q regime");
        points.push_back(point_from_rate(uniform, n, *rate, alpha));
      }
    }
  } else {
    schema_error("grid needs points, parametric or regime");
  }
  if (points.empty()) schema_error("grid is empty");
  return points;
}

std::string m_or_p(const GridPoint& pt) {
  if (const auto* u = std::get_if<UniformModel>(&pt.model)) return std::to_string(u->m);
  return format_number(std::get<GeometricModel>(pt.model).rate.p);
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

double theory_value(const SweepConfig& cfg, const GridPoint& pt) {
  if (cfg.theory == TheorySource::Poisson) {
    if (!cfg.statistic || !pt.alpha) schema_error("poisson theory needs a statistic and a regime grid");
    return poisson_limit(*cfg.statistic, cfg.statistic_params, *pt.alpha).probability.value;
  }
  if (const auto* u = std::get_if<UniformModel>(&pt.model)) {
    return exact_prob_uniform(u->n, u->m, cfg.property).lo;
  }
  const auto& g = std::get<GeometricModel>(pt.model);
  const auto exact = exact_prob_geometric(g.n, g.rate, cfg.property);
  return exact.mid();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  if (x == std::floor(x) && std::fabs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", x);
  }
  return buf;
}

Property parse_property_json(std::string_view json_text) {
  try {
    return parse_property_object(json::parse(json_text));
  } catch (const json::exception& e) {
    schema_error(std::string("invalid property JSON: ") + e.what());
  }
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) schema_error("top level must be an object");
    if (doc.value("schema", "") != kSweepSchema) {
      schema_error(std::string("schema must be \"") + kSweepSchema + "\"");
    }
    SweepConfig cfg;
    const std::string model = doc.value("model", "geometric");
    if (model != "geometric" && model != "uniform") schema_error("model must be geometric or uniform");
    const bool uniform = model == "uniform";

    if (doc.contains("statistic")) {
      cfg.statistic = doc.at("statistic").get<std::string>();
      if (doc.contains("params")) cfg.statistic_params = parse_params(doc.at("params"));
      // Validates the id and parameters early.
      (void)poisson_limit(*cfg.statistic, cfg.statistic_params, 1.0);
    }
    if (doc.contains("property")) {
      cfg.property = parse_property_object(doc.at("property"));
    } else if (cfg.statistic) {
      cfg.property = property_for_statistic(*cfg.statistic, cfg.statistic_params);
    } else {
      schema_error("property is required");
    }

    const std::string theory = doc.value("theory", "none");
    if (theory == "none") cfg.theory = TheorySource::None;
    else if (theory == "poisson") cfg.theory = TheorySource::Poisson;
    else if (theory == "oracle") cfg.theory = TheorySource::Oracle;
    else schema_error("theory must be none, poisson or oracle");

    const std::string mode = doc.value("mode", "probability");
    if (mode == "probability") cfg.mode = SweepMode::Probability;
    else if (mode == "poisson_fit") cfg.mode = SweepMode::PoissonFit;
    else schema_error("mode must be probability or poisson_fit");
    if (cfg.mode == SweepMode::PoissonFit && cfg.theory == TheorySource::Oracle) {
      schema_error("poisson_fit compares against the Poisson row, not the oracle");
    }

    if (doc.contains("trials")) cfg.trials = get_u64(doc.at("trials"), "trials");
    if (cfg.trials == 0) schema_error("trials must be >= 1");
    if (doc.contains("seed")) cfg.seed = get_u64(doc.at("seed"), "seed");
    if (doc.contains("confidence")) cfg.confidence = get_double(doc.at("confidence"), "confidence");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) schema_error("confidence must lie in (0, 1)");
    if (doc.contains("interval")) cfg.interval = parse_interval_kind(doc.at("interval").get<std::string>());
    if (doc.contains("workers")) {
      const auto& w = doc.at("workers");
      if (w.is_string()) {
        if (w.get<std::string>() != "auto") schema_error("workers must be a positive integer or \"auto\"");
        cfg.workers = 0;
      } else {
        const auto v = get_u64(w, "workers");
        if (v == 0 || v > 4096) schema_error("workers must be a positive integer or \"auto\"");
        cfg.workers = static_cast<int>(v);
      }
    }
    const std::string format = doc.value("format", "csv");
    if (format == "csv") cfg.format = OutputFormat::Csv;
    else if (format == "jsonl") cfg.format = OutputFormat::Jsonl;
    else schema_error("format must be csv or jsonl");
    cfg.record_timing = doc.value("record_timing", false);

    if (!doc.contains("grid")) schema_error("grid is required");
    cfg.points = parse_grid(doc.at("grid"), uniform, cfg);
    return cfg;
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    const auto& pt = cfg.points[i];
    const auto start = std::chrono::steady_clock::now();
    SweepRow row;
    row.point = pt;
    if (cfg.mode == SweepMode::Probability) {
      mc::ProbabilityRequest req{pt.model, cfg.property, cfg.trials, cfg.seed, i, cfg.confidence,
                                 cfg.interval};
      row.estimate = mc::estimate_probability(req, cfg.workers).result;
      if (cfg.theory != TheorySource::None) row.theory = theory_value(cfg, pt);
    } else {
      const Property& prop = cfg.property;
      const auto hist = mc::count_histogram(
          pt.model, [&](const Composition& c) { return prop.count(c); }, cfg.trials, cfg.seed, i,
          cfg.workers);
      const std::uint64_t zeros = hist.empty() ? 0 : hist[0];
      const Interval ci = binomial_interval(cfg.interval, zeros, cfg.trials, cfg.confidence);
      row.estimate = EstimateResult{static_cast<double>(zeros) / static_cast<double>(cfg.trials),
                                    ci.lo, ci.hi, cfg.trials, cfg.seed};
      if (cfg.theory == TheorySource::Poisson) {
        if (!cfg.statistic || !pt.alpha) schema_error("poisson theory needs a statistic and a regime grid");
        const auto limit = poisson_limit(*cfg.statistic, cfg.statistic_params, *pt.alpha);
        row.poisson_mean = limit.mean;
        row.theory = limit.p_zero;
        row.tv_distance = total_variation_to_poisson(hist, limit.mean);
      }
    }
    if (row.theory) row.abs_diff = std::fabs(row.estimate.point - *row.theory);
    if (cfg.record_timing) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_header(const SweepConfig& cfg) {
  if (cfg.mode == SweepMode::PoissonFit) {
    return "n,m_or_p,trials,p_zero_hat,ci_low,ci_high,poisson_mean,p_zero_theory,abs_diff,tv_distance,"
           "seconds";
  }
  return "n,m_or_p,trials,p_hat,ci_low,ci_high,theory,abs_diff,seconds";
}

void write_sweep(std::ostream& out, const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
  const bool fit = cfg.mode == SweepMode::PoissonFit;
  if (cfg.format == OutputFormat::Csv) {
    out << sweep_header(cfg) << '\n';
    for (const auto& r : rows) {
      out << model_length(r.point.model) << ',' << m_or_p(r.point) << ',' << r.estimate.trials << ','
          << format_number(r.estimate.point) << ',' << format_number(r.estimate.ci_low) << ','
          << format_number(r.estimate.ci_high) << ',';
      if (fit) out << opt(r.poisson_mean) << ',';
      out << opt(r.theory) << ',' << opt(r.abs_diff) << ',';
      if (fit) out << opt(r.tv_distance) << ',';
      out << opt(r.seconds) << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["schema"] = kSweepSchema;
    j["model"] = describe(r.point.model);
    j["n"] = model_length(r.point.model);
    j["m_or_p"] = m_or_p(r.point);
    if (r.point.alpha) j["alpha"] = *r.point.alpha;
    j["property"] = cfg.property.describe();
    j["trials"] = r.estimate.trials;
    j["seed"] = r.estimate.seed;
    j[fit ? "p_zero_hat" : "p_hat"] = r.estimate.point;
    j["ci_low"] = r.estimate.ci_low;
    j["ci_high"] = r.estimate.ci_high;
    if (fit) j["poisson_mean"] = r.poisson_mean ? json(*r.poisson_mean) : json(nullptr);
    j[fit ? "p_zero_theory" : "theory"] = r.theory ? json(*r.theory) : json(nullptr);
    j["abs_diff"] = r.abs_diff ? json(*r.abs_diff) : json(nullptr);
    if (fit) j["tv_distance"] = r.tv_distance ? json(*r.tv_distance) : json(nullptr);
    j["seconds"] = r.seconds ? json(*r.seconds) : json(nullptr);
    out << j.dump() << '\n';
  }
}

}  // namespace compevo
