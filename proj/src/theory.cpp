#include "compevo/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace compevo {

namespace {

using boost::multiprecision::cpp_rational;

// p^e without evaluating log(0) for e = 0.
double p_pow(const GeometricRate& rate, double e) {
  if (e == 0.0) return 1.0;
  if (rate.p == 0.0) return 0.0;
  return std::exp(e * rate.log_p());
}

// 1 - p^e, accurate when p is close to 1.
double one_minus_p_pow(const GeometricRate& rate, double e) {
  if (e == 0.0) return 0.0;
  if (rate.p == 0.0) return 1.0;
  return -std::expm1(e * rate.log_p());
}

double q_pow(const GeometricRate& rate, double e) {
  if (e == 0.0) return 1.0;
  return std::exp(e * rate.log_q());
}

TheoryPrediction exact_value(double value, PredictionKind kind, std::string regime = "any n, p") {
  return TheoryPrediction{value, kind, std::move(regime), true};
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double log_binomial(double top, double bottom) {
  using boost::math::lgamma;
  return lgamma(top + 1.0) - lgamma(bottom + 1.0) - lgamma(top - bottom + 1.0);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Exponent -num/den written as a reduced fraction.
struct Exponent {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Exponent make(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    if (g != 0) {
      num /= g;
      den /= g;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return {num, den};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string text() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* name, const std::string& who) {
  if (!v) throw UsageError(who + ": missing parameter " + name);
  return *v;
}

const PatternSpec& need_pattern(const TheoryParams& params, const std::string& who) {
  if (!params.pattern) throw UsageError(who + ": missing parameter pattern");
  return *params.pattern;
}

std::vector<std::uint64_t> multiplicities(const PatternSpec& spec) {
  std::map<Term, std::uint64_t> counts;
  for (Term t : spec.flat()) counts[t] += 1;
  std::vector<std::uint64_t> out;
  for (const auto& [value, count] : counts) out.push_back(count);
  return out;
}

// lambda = prod_j s_j for the sorted multiset 0^{l_0} ... r^{l_r}.
double ordering_lambda(const std::vector<std::uint64_t>& ell) {
  double lambda = 1.0;
  std::uint64_t suffix = 0;
  for (auto it = ell.rbegin(); it != ell.rend(); ++it) {
    suffix += *it;
    lambda *= static_cast<double>(suffix);
  }
  return lambda;
}

std::uint64_t largest_block_size(const PatternSpec& spec) {
  std::uint64_t best = 0;
  for (const auto& block : spec.blocks()) {
    Term s = 0;
    for (Term t : block) s += t;
    best = std::max<std::uint64_t>(best, s);
  }
  return best;
}

std::uint64_t longest_block(const PatternSpec& spec) {
  std::uint64_t best = 0;
  for (const auto& block : spec.blocks()) best = std::max<std::uint64_t>(best, block.size());
  return best;
}

double factorial(std::uint64_t k) {
  double f = 1.0;
  for (std::uint64_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

// One Poisson row: how to get the mean and the model parameter from
// (params, alpha, n).
struct PoissonRow {
  StatisticInfo info;
  std::function<PoissonLimit(const TheoryParams&, double)> limit;
  std::function<std::optional<GeometricRate>(const TheoryParams&, double, double)> rate;
};

GeometricRate rate_p(double p) { return GeometricRate::from_p(std::clamp(p, 0.0, std::nextafter(1.0, 0.0))); }
GeometricRate rate_q(double q) { return GeometricRate::from_q(std::clamp(q, 1e-300, 1.0)); }

PoissonLimit finish(std::string statistic, std::string property, std::string regime, double mean,
                    bool zero_event) {
  PoissonLimit out;
  out.statistic = std::move(statistic);
  out.property = std::move(property);
  out.regime = std::move(regime);
  out.mean = mean;
  out.p_zero = std::exp(-mean);
  out.p_positive = -std::expm1(-mean);
  out.property_is_zero_event = zero_event;
  out.probability = TheoryPrediction{zero_event ? out.p_zero : out.p_positive,
                                     PredictionKind::Probability, out.regime, false};
  return out;
}

std::string k_root(std::uint64_t k) { return "n^(-1/" + std::to_string(k) + ")"; }

const std::vector<PoissonRow>& poisson_rows() {
  static const std::vector<PoissonRow> rows = [] {
    std::vector<PoissonRow> r;
    auto add = [&](std::string id, std::string needs, std::string description, auto limit,
                   auto rate) {
      r.push_back(PoissonRow{StatisticInfo{std::move(id), std::move(needs), std::move(description)},
                             limit, rate});
    };
    const auto none = [](const TheoryParams&, double, double) -> std::optional<GeometricRate> {
      return std::nullopt;
    };

    add("cmax_ge", "k", "component of length >= k appears",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "cmax_ge");
          return finish("cmax_ge", "cmax >= " + std::to_string(k), "p ~ alpha " + k_root(k),
                        std::pow(a, double(k)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a * std::pow(n, -1.0 / double(need(t.k, "k", "cmax_ge"))));
        });
    add("gmax_ge", "k", "gap of length >= k persists",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "gmax_ge");
          return finish("gmax_ge", "gmax >= " + std::to_string(k), "q ~ alpha " + k_root(k),
                        std::pow(a, double(k)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a * std::pow(n, -1.0 / double(need(t.k, "k", "gmax_ge"))));
        });
    add("cmax_ge_sharp", "k", "long component, 1 << k << log n",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "cmax_ge_sharp");
          return finish("cmax_ge_sharp", "cmax >= " + std::to_string(k),
                        "p = exp(-(log n - alpha)/k), 1 << k << log n", std::exp(a), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const double k = double(need(t.k, "k", "cmax_ge_sharp"));
          return rate_p(std::exp(-(std::log(n) - a) / k));
        });
    add("gmax_ge_sharp", "k", "long gap, 1 << k << log n",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "gmax_ge_sharp");
          return finish("gmax_ge_sharp", "gmax >= " + std::to_string(k),
                        "q = exp(-(log n - alpha)/k), 1 << k << log n", std::exp(a), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const double k = double(need(t.k, "k", "gmax_ge_sharp"));
          return rate_q(std::exp(-(std::log(n) - a) / k));
        });
    add("cmin_gt", "k", "no component of length <= k",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "cmin_gt");
          return finish("cmin_gt", "cmin > " + std::to_string(k), "q ~ alpha n^(-1/2)",
                        a * a * double(k), true);
        },
        [](const TheoryParams&, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a / std::sqrt(n));
        });
    add("gmin_gt", "k", "no gap of length <= k",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "gmin_gt");
          return finish("gmin_gt", "gmin > " + std::to_string(k), "p ~ alpha n^(-1/2)",
                        a * a * double(k), true);
        },
        [](const TheoryParams&, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a / std::sqrt(n));
        });
    add("cmin_gt_growing", "k", "no component of length <= k, 1 << k << n",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "cmin_gt_growing");
          return finish("cmin_gt_growing", "cmin > " + std::to_string(k),
                        "q ~ alpha / sqrt(k n), 1 << k << n", a * a, true);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a / std::sqrt(double(need(t.k, "k", "cmin_gt_growing")) * n));
        });
    add("gmin_gt_growing", "k", "no gap of length <= k, 1 << k << n",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "gmin_gt_growing");
          return finish("gmin_gt_growing", "gmin > " + std::to_string(k),
                        "p ~ alpha / sqrt(k n), 1 << k << n", a * a, true);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a / std::sqrt(double(need(t.k, "k", "gmin_gt_growing")) * n));
        });
    add("exact_appear", "pattern", "nonzero exact consecutive pattern appears",
        [](const TheoryParams& t, double a) {
          const auto& spec = need_pattern(t, "exact_appear");
          const auto s = spec.size();
          if (s == 0) throw UsageError("exact_appear: pattern must be nonzero");
          return finish("exact_appear", "contains " + spec.to_string(),
                        "p ~ alpha " + k_root(s), std::pow(a, double(s)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a * std::pow(n, -1.0 / double(need_pattern(t, "exact_appear").size())));
        });
    add("exact_disappear", "pattern", "exact consecutive pattern disappears",
        [](const TheoryParams& t, double a) {
          const auto& spec = need_pattern(t, "exact_disappear");
          const auto k = spec.length();
          return finish("exact_disappear", "contains " + spec.to_string(),
                        "q ~ alpha " + k_root(k), std::pow(a, double(k)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a * std::pow(n, -1.0 / double(need_pattern(t, "exact_disappear").length())));
        });
    add("equal_run_appear", "k", "run of k equal nonzero terms appears",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "equal_run_appear");
          return finish("equal_run_appear", "run of " + std::to_string(k) + " equal nonzero terms",
                        "p ~ alpha " + k_root(k), std::pow(a, double(k)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a * std::pow(n, -1.0 / double(need(t.k, "k", "equal_run_appear"))));
        });
    add("equal_run_disappear", "k", "runs of k equal nonzero terms disappear (k >= 2)",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "equal_run_disappear");
          if (k < 2) throw UsageError("equal_run_disappear: needs k >= 2");
          return finish("equal_run_disappear",
                        "run of " + std::to_string(k) + " equal nonzero terms",
                        "q ~ alpha " + k_root(k - 1), std::pow(a, double(k - 1)) / double(k), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const auto k = need(t.k, "k", "equal_run_disappear");
          return rate_q(a * std::pow(n, -1.0 / double(k - 1)));
        });
    add("upper_appear", "pattern", "nonzero upper consecutive pattern appears",
        [](const TheoryParams& t, double a) {
          const auto& spec = need_pattern(t, "upper_appear");
          const auto s = spec.size();
          if (s == 0) throw UsageError("upper_appear: pattern must be nonzero");
          return finish("upper_appear", "contains " + spec.to_string(), "p ~ alpha " + k_root(s),
                        std::pow(a, double(s)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a * std::pow(n, -1.0 / double(need_pattern(t, "upper_appear").size())));
        });
    add("lower_disappear", "pattern", "lower consecutive pattern disappears",
        [](const TheoryParams& t, double a) {
          const auto& spec = need_pattern(t, "lower_disappear");
          const auto k = spec.length();
          double rho = 1.0;
          for (Term r : spec.flat()) rho *= double(r) + 1.0;
          return finish("lower_disappear", "contains " + spec.to_string(),
                        "q ~ alpha " + k_root(k), std::pow(a, double(k)) * rho, false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a * std::pow(n, -1.0 / double(need_pattern(t, "lower_disappear").length())));
        });
    add("tmax_ge", "r", "largest term reaches r",
        [](const TheoryParams& t, double a) {
          const auto r = need(t.r, "r", "tmax_ge");
          return finish("tmax_ge", "tmax >= " + std::to_string(r), "p ~ alpha " + k_root(r),
                        std::pow(a, double(r)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_p(a * std::pow(n, -1.0 / double(need(t.r, "r", "tmax_ge"))));
        });
    add("tmax_two_point", "c", "largest term for p = 1/omega, omega >> 1",
        [](const TheoryParams& t, double) {
          if (!t.c) throw UsageError("tmax_two_point: missing parameter c");
          return finish("tmax_two_point", "tmax >= r", "p = 1/omega, r = (log n + c)/log omega",
                        std::exp(-*t.c), false);
        },
        none);
    add("tmax_constant_p", "p,c", "largest term for constant p",
        [](const TheoryParams& t, double) {
          if (!t.c || !t.p) throw UsageError("tmax_constant_p: needs p and c");
          return finish("tmax_constant_p", "tmax >= r", "p constant, r = log_(1/p) n + c",
                        std::pow(*t.p, *t.c), false);
        },
        none);
    add("tmin_ge", "r", "smallest term reaches r",
        [](const TheoryParams& t, double a) {
          const auto r = need(t.r, "r", "tmin_ge");
          return finish("tmin_ge", "tmin >= " + std::to_string(r), "q ~ alpha n^(-1)",
                        a * double(r), true);
        },
        [](const TheoryParams&, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a / n);
        });
    add("tmin_ge_growing", "r", "smallest term reaches r, r >> 1",
        [](const TheoryParams& t, double a) {
          const auto r = need(t.r, "r", "tmin_ge_growing");
          return finish("tmin_ge_growing", "tmin >= " + std::to_string(r),
                        "q ~ alpha / (r n), r >> 1", a, true);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          return rate_q(a / (double(need(t.r, "r", "tmin_ge_growing")) * n));
        });
    add("increasing_run", "k", "consecutive total ordering pattern of length k appears",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "increasing_run");
          if (k < 2) throw UsageError("increasing_run: needs k >= 2");
          const auto e = k * (k - 1) / 2;
          return finish("increasing_run", "increasing run of length " + std::to_string(k),
                        "p ~ alpha n^(-2/(k(k-1))), k = " + std::to_string(k),
                        std::pow(a, double(e)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const double k = double(need(t.k, "k", "increasing_run"));
          return rate_p(a * std::pow(n, -2.0 / (k * (k - 1.0))));
        });
    add("ordering_disappear", "pattern", "consecutive ordering pattern with a repeated term disappears",
        [](const TheoryParams& t, double a) {
          const auto& spec = need_pattern(t, "ordering_disappear");
          if (spec.kind() != PatternKind::Ordering || !spec.is_consecutive()) {
            throw UsageError("ordering_disappear: needs a consecutive ordering pattern");
          }
          const auto ell = multiplicities(spec);
          const auto d = spec.length() - ell.size();
          if (d == 0) throw UsageError("ordering_disappear: pattern has no repeated term");
          const double lambda = ordering_lambda(ell);
          return finish("ordering_disappear", "contains " + spec.to_string(),
                        "q ~ alpha " + k_root(d) + ", d = k - (r+1)",
                        std::pow(a, double(d)) / lambda, false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const auto& spec = need_pattern(t, "ordering_disappear");
          const auto d = spec.length() - multiplicities(spec).size();
          if (d == 0) throw UsageError("ordering_disappear: pattern has no repeated term");
          return rate_q(a * std::pow(n, -1.0 / double(d)));
        });
    add("carlitz", "k (default 2)", "run of k equal terms disappears; k = 2 is the Carlitz transition",
        [](const TheoryParams& t, double a) {
          const auto k = t.k.value_or(2);
          if (k < 2) throw UsageError("carlitz: needs k >= 2");
          return finish("carlitz", "run of " + std::to_string(k) + " equal terms",
                        "q ~ alpha " + k_root(k - 1), std::pow(a, double(k - 1)) / double(k), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const auto k = t.k.value_or(2);
          if (k < 2) throw UsageError("carlitz: needs k >= 2");
          return rate_q(a * std::pow(n, -1.0 / double(k - 1)));
        });
    add("equal_terms", "k", "at least k equal terms anywhere disappear",
        [](const TheoryParams& t, double a) {
          const auto k = need(t.k, "k", "equal_terms");
          if (k < 2) throw UsageError("equal_terms: needs k >= 2");
          return finish("equal_terms", "at least " + std::to_string(k) + " equal terms",
                        "q ~ alpha n^(-k/(k-1)), k = " + std::to_string(k),
                        std::pow(a, double(k - 1)) / (double(k) * factorial(k)), false);
        },
        [](const TheoryParams& t, double a, double n) -> std::optional<GeometricRate> {
          const double k = double(need(t.k, "k", "equal_terms"));
          return rate_q(a * std::pow(n, -k / (k - 1.0)));
        });
    return r;
  }();
  return rows;
}

const PoissonRow& find_row(const std::string& id) {
  for (const auto& row : poisson_rows()) {
    if (row.info.id == id) return row;
  }
  throw UsageError("unknown statistic id: " + id);
}

ThresholdLocation make_threshold(std::string id, std::string parameter, Exponent e,
                                 std::optional<std::uint64_t> n) {
  ThresholdLocation t;
  t.statistic = std::move(id);
  t.parameter = std::move(parameter);
  t.exponent = e.value();
  // m* = n p*/q*: with p* = n^e (q* ~ 1) this is n^(1+e); with q* = n^e
  // (p* ~ 1) it is n^(1-e).
  const Exponent m = t.parameter == "p" ? Exponent::make(e.den + e.num, e.den)
                                        : Exponent::make(e.den - e.num, e.den);
  t.m_exponent = m.value();
  t.formula = t.parameter + "* = n^(" + e.text() + ")";
  t.m_formula = "m* = n^(" + m.text() + ")";
  if (n) {
    const double nn = static_cast<double>(*n);
    const double star = std::pow(nn, t.exponent);
    t.value = star;
    // Use the exact transfer m* = n p/q at the threshold value.
    const double p = t.parameter == "p" ? star : 1.0 - star;
    const double q = t.parameter == "p" ? 1.0 - star : star;
    t.m_value = q > 0.0 ? nn * p / q : std::numeric_limits<double>::infinity();
  }
  return t;
}

}  // namespace

std::string to_string(PredictionKind kind) {
  switch (kind) {
    case PredictionKind::Expectation: return "expectation";
    case PredictionKind::Probability: return "probability";
    case PredictionKind::PoissonMean: return "poisson_mean";
    case PredictionKind::ThresholdLocation: return "threshold_location";
  }
  return "?";
}

TheoryPrediction expected_components(std::uint64_t n, const GeometricRate& rate) {
  const double nn = static_cast<double>(n);
  return exact_value(nn * rate.q * rate.p + rate.p * rate.p, PredictionKind::Expectation);
}

TheoryPrediction expected_gaps(std::uint64_t n, const GeometricRate& rate) {
  const double nn = static_cast<double>(n);
  return exact_value(nn * rate.q * rate.p + rate.q * rate.q, PredictionKind::Expectation);
}

TheoryPrediction mean_component_length(std::uint64_t n, const GeometricRate& rate) {
  if (rate.p == 0.0) throw UsageError("mean component length needs p > 0");
  const double nn = static_cast<double>(n);
  return exact_value(nn / (nn * rate.q + rate.p), PredictionKind::Expectation);
}

TheoryPrediction mean_gap_length(std::uint64_t n, const GeometricRate& rate) {
  const double nn = static_cast<double>(n);
  return exact_value(nn / (nn * rate.p + rate.q), PredictionKind::Expectation);
}

TheoryPrediction prob_exact_consecutive_at_position(const PatternSpec& spec,
                                                    const GeometricRate& rate) {
  if (spec.kind() != PatternKind::Exact || !spec.is_consecutive()) {
    throw UsageError("needs an exact consecutive pattern");
  }
  const double k = static_cast<double>(spec.length());
  const double s = static_cast<double>(spec.size());
  return exact_value(q_pow(rate, k) * p_pow(rate, s), PredictionKind::Probability);
}

TheoryPrediction expected_exact_occurrences(std::uint64_t n, const PatternSpec& spec,
                                            const GeometricRate& rate) {
  const auto at = prob_exact_consecutive_at_position(spec, rate);
  const std::uint64_t k = spec.length();
  const double windows = n + 1 > k ? static_cast<double>(n + 1 - k) : 0.0;
  return exact_value(windows * at.value, PredictionKind::Expectation);
}

double argmax_p_exact(const PatternSpec& spec) {
  // d/dp [k log q + s log p] = s/p - k/q vanishes at p/q = s/k.
  const double k = static_cast<double>(spec.length());
  const double s = static_cast<double>(spec.size());
  return s / (k + s);
}

TheoryPrediction prob_exact_consecutive_at_position_uniform(std::uint64_t n, std::uint64_t m,
                                                            const PatternSpec& spec) {
  if (spec.kind() != PatternKind::Exact || !spec.is_consecutive()) {
    throw UsageError("needs an exact consecutive pattern");
  }
  const std::uint64_t k = spec.length();
  const std::uint64_t s = spec.size();
  const std::string regime = "uniform model, any n, m";
  if (m < s || n < k) return exact_value(0.0, PredictionKind::Probability, regime);
  // The rest of the composition is an (n-k)-composition of m-s.
  if (m + n <= 4000) {
    const cpp_rational ratio(count_compositions(n - k, m - s), count_compositions(n, m));
    return exact_value(static_cast<double>(ratio), PredictionKind::Probability, regime);
  }
  if (n == k) {
    const double log_total = log_binomial(double(m + n - 1), double(m));
    return exact_value(m == s ? std::exp(-log_total) : 0.0, PredictionKind::Probability, regime);
  }
  const double log_num = log_binomial(double(m - s + n - k - 1), double(m - s));
  const double log_den = log_binomial(double(m + n - 1), double(m));
  return exact_value(std::exp(log_num - log_den), PredictionKind::Probability, regime);
}

TheoryPrediction prob_upper_at_position(const PatternSpec& spec, const GeometricRate& rate) {
  if (spec.kind() != PatternKind::Upper || !spec.is_consecutive()) {
    throw UsageError("needs an upper consecutive pattern");
  }
  return exact_value(p_pow(rate, double(spec.size())), PredictionKind::Probability);
}

TheoryPrediction prob_lower_at_position(const PatternSpec& spec, const GeometricRate& rate) {
  if (spec.kind() != PatternKind::Lower || !spec.is_consecutive()) {
    throw UsageError("needs a lower consecutive pattern");
  }
  double prob = 1.0;
  for (Term r : spec.flat()) prob *= one_minus_p_pow(rate, double(r) + 1.0);
  return exact_value(prob, PredictionKind::Probability);
}

TheoryPrediction prob_equal_nonzero_run_at_position(std::uint64_t k, const GeometricRate& rate) {
  if (k == 0) throw UsageError("run length must be positive");
  const double kk = static_cast<double>(k);
  if (rate.p == 0.0) return exact_value(0.0, PredictionKind::Probability);
  // sum_{v >= 1} (q p^v)^k
  const double value = q_pow(rate, kk) * p_pow(rate, kk) / one_minus_p_pow(rate, kk);
  return exact_value(value, PredictionKind::Probability);
}

TheoryPrediction prob_ordering_multiset(const std::vector<std::uint64_t>& ell,
                                        const GeometricRate& rate) {
  if (ell.empty()) throw UsageError("ordering pattern must be nonempty");
  std::vector<std::uint64_t> suffix(ell.size() + 1, 0);
  for (std::size_t j = ell.size(); j-- > 0;) {
    if (ell[j] == 0) throw UsageError("ordering multiplicities must be positive");
    suffix[j] = suffix[j + 1] + ell[j];
  }
  double prob = 1.0;
  for (std::size_t j = 0; j < ell.size(); ++j) {
    prob *= q_pow(rate, double(ell[j])) * p_pow(rate, double(suffix[j + 1])) /
            one_minus_p_pow(rate, double(suffix[j]));
  }
  return exact_value(clamp01(prob), PredictionKind::Probability);
}

TheoryPrediction prob_ordering_at_position(const PatternSpec& spec, const GeometricRate& rate) {
  if (spec.kind() != PatternKind::Ordering || !spec.is_consecutive()) {
    throw UsageError("needs a consecutive ordering pattern");
  }
  return prob_ordering_multiset(multiplicities(spec), rate);
}

TheoryPrediction prob_tmax_lt(std::uint64_t n, const GeometricRate& rate, std::uint64_t r) {
  if (r == 0) throw UsageError("tmax threshold r must be >= 1");
  const double tail = p_pow(rate, double(r));
  return exact_value(std::exp(double(n) * std::log1p(-tail)), PredictionKind::Probability);
}

TheoryPrediction prob_tmin_ge(std::uint64_t n, const GeometricRate& rate, std::uint64_t r) {
  if (r == 0) throw UsageError("tmin threshold r must be >= 1");
  return exact_value(p_pow(rate, double(r) * double(n)), PredictionKind::Probability);
}

const std::vector<StatisticInfo>& poisson_statistics() {
  static const std::vector<StatisticInfo> infos = [] {
    std::vector<StatisticInfo> out;
    for (const auto& row : poisson_rows()) out.push_back(row.info);
    return out;
  }();
  return infos;
}

PoissonLimit poisson_limit(const std::string& statistic, const TheoryParams& params, double alpha) {
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  return find_row(statistic).limit(params, alpha);
}

std::optional<GeometricRate> regime_rate(const std::string& statistic, const TheoryParams& params,
                                         double alpha, std::uint64_t n) {
  if (n == 0) throw UsageError("n must be positive");
  return find_row(statistic).rate(params, alpha, static_cast<double>(n));
}

const std::vector<StatisticInfo>& threshold_statistics() {
  static const std::vector<StatisticInfo> infos = {
      {"cmax_ge", "k", "components of length k appear: p* = n^(-1/k)"},
      {"gmax_ge", "k", "gaps of length k disappear: q* = n^(-1/k)"},
      {"cmin_gt", "k", "short components disappear: q* = n^(-1/2)"},
      {"gmin_gt", "k", "short gaps appear: p* = n^(-1/2)"},
      {"exact_appear", "pattern", "exact pattern appears: p* = n^(-1/s), s = largest block size"},
      {"exact_disappear", "pattern",
       "exact pattern disappears: q* = n^(-1/l), l = longest block length"},
      {"upper_appear", "pattern", "upper pattern appears: p* = n^(-1/s), s = largest block size"},
      {"lower_disappear", "pattern",
       "lower pattern disappears: q* = n^(-1/l), l = longest block length"},
      {"equal_run_appear", "k", "run of k equal nonzero terms appears: p* = n^(-1/k)"},
      {"equal_run_disappear", "k", "such runs disappear: q* = n^(-1/(k-1))"},
      {"tmax_ge", "r", "largest term reaches r: p* = n^(-1/r)"},
      {"tmin_ge", "r", "smallest term reaches r: q* = n^(-1)"},
      {"increasing_run", "k", "increasing run of length k: p* = n^(-2/(k(k-1)))"},
      {"ordering_appear", "pattern",
       "consecutive ordering pattern appears at p* = n^(-1/|pi|); nonconsecutive total ordering "
       "at p* = n^(-1/(k-1))"},
      {"ordering_disappear", "pattern", "ordering pattern with a repeat disappears: q* = n^(-1/d)"},
      {"carlitz", "k (default 2)", "runs of k equal terms disappear: q* = n^(-1/(k-1))"},
      {"equal_terms", "k", "k equal terms anywhere disappear: q* = n^(-k/(k-1))"},
      {"square", "c (default 0)", "k-square heuristic k*(n); no finite-n exponent"},
  };
  return infos;
}

ThresholdLocation threshold_location(const std::string& statistic, const TheoryParams& params,
                                     std::optional<std::uint64_t> n) {
  const auto& id = statistic;
  auto root = [](std::uint64_t k) { return Exponent::make(-1, static_cast<std::int64_t>(k)); };
  auto positive = [&](std::uint64_t v, const char* what) {
    if (v == 0) throw UsageError(id + ": " + what + " must be positive");
    return v;
  };

  if (id == "cmax_ge") return make_threshold(id, "p", root(positive(need(params.k, "k", id), "k")), n);
  if (id == "gmax_ge") return make_threshold(id, "q", root(positive(need(params.k, "k", id), "k")), n);
  if (id == "cmin_gt") return make_threshold(id, "q", Exponent::make(-1, 2), n);
  if (id == "gmin_gt") return make_threshold(id, "p", Exponent::make(-1, 2), n);
  if (id == "equal_run_appear") {
    return make_threshold(id, "p", root(positive(need(params.k, "k", id), "k")), n);
  }
  if (id == "equal_run_disappear") {
    const auto k = need(params.k, "k", id);
    if (k < 2) throw UsageError(id + ": needs k >= 2");
    return make_threshold(id, "q", root(k - 1), n);
  }
  if (id == "tmax_ge") return make_threshold(id, "p", root(positive(need(params.r, "r", id), "r")), n);
  if (id == "tmin_ge") return make_threshold(id, "q", Exponent::make(-1, 1), n);
  if (id == "increasing_run") {
    const auto k = need(params.k, "k", id);
    if (k < 2) throw UsageError(id + ": needs k >= 2");
    return make_threshold(id, "p", Exponent::make(-2, static_cast<std::int64_t>(k * (k - 1))), n);
  }
  if (id == "carlitz") {
    const auto k = params.k.value_or(2);
    if (k < 2) throw UsageError(id + ": needs k >= 2");
    return make_threshold(id, "q", root(k - 1), n);
  }
  if (id == "equal_terms") {
    const auto k = need(params.k, "k", id);
    if (k < 2) throw UsageError(id + ": needs k >= 2");
    return make_threshold(id, "q",
                          Exponent::make(-static_cast<std::int64_t>(k), static_cast<std::int64_t>(k - 1)),
                          n);
  }
  if (id == "exact_appear" || id == "upper_appear") {
    const auto& spec = need_pattern(params, id);
    const auto want = id == "exact_appear" ? PatternKind::Exact : PatternKind::Upper;
    if (spec.kind() != want) throw UsageError(id + ": pattern kind mismatch");
    const auto s = largest_block_size(spec);
    if (s == 0) throw UsageError(id + ": pattern must be nonzero");
    return make_threshold(id, "p", root(s), n);
  }
  if (id == "exact_disappear" || id == "lower_disappear") {
    const auto& spec = need_pattern(params, id);
    const auto want = id == "exact_disappear" ? PatternKind::Exact : PatternKind::Lower;
    if (spec.kind() != want) throw UsageError(id + ": pattern kind mismatch");
    return make_threshold(id, "q", root(longest_block(spec)), n);
  }
  if (id == "ordering_appear") {
    const auto& spec = need_pattern(params, id);
    if (spec.kind() != PatternKind::Ordering) throw UsageError(id + ": needs an ordering pattern");
    const auto k = spec.length();
    const bool total = multiplicities(spec).size() == k;
    if (spec.is_consecutive()) {
      if (spec.size() == 0) throw UsageError(id + ": pattern must be nonzero");
      return make_threshold(id, "p", root(spec.size()), n);
    }
    if (spec.all_singletons() && total && k >= 2) return make_threshold(id, "p", root(k - 1), n);
    throw UsageError(id + ": no appearance threshold known for this pattern");
  }
  if (id == "ordering_disappear") {
    const auto& spec = need_pattern(params, id);
    if (spec.kind() != PatternKind::Ordering || !spec.is_consecutive()) {
      throw UsageError(id + ": needs a consecutive ordering pattern");
    }
    const auto d = spec.length() - multiplicities(spec).size();
    if (d == 0) throw UsageError(id + ": pattern has no repeated term");
    return make_threshold(id, "q", root(d), n);
  }
  if (id == "square") {
    const double c = params.c.value_or(0.0);
    ThresholdLocation t;
    t.statistic = id;
    t.parameter = "k";
    t.exponent = std::numeric_limits<double>::quiet_NaN();
    t.m_exponent = std::numeric_limits<double>::quiet_NaN();
    t.formula = "k* = (log n / log log n)(1 + " + fmt(c) + " log log log n / log log n)";
    t.m_formula = "q = theta log log n / log n";
    if (n) t.value = square_heuristic(*n, c, 1.0).k_star;
    return t;
  }
  throw UsageError("unknown statistic id: " + id);
}

SquareHeuristic square_heuristic(std::uint64_t n, double c, double theta) {
  const double L = std::log(static_cast<double>(n));
  const double LL = std::log(L);
  const double LLL = std::log(LL);
  if (!(L > 0.0) || !(LL > 0.0) || !(LLL > 0.0)) {
    throw UsageError("square heuristic needs n > e^e");
  }
  SquareHeuristic h;
  h.k_star = (L / LL) * (1.0 + c * LLL / LL);
  h.q = theta * LL / L;
  // Real-valued k: same expressions as the integer versions below.
  const double k = h.k_star;
  const double log_q = std::log(h.q);
  const double log_p = std::log1p(-h.q);
  h.log_expected = std::log(static_cast<double>(n) + 1.0 - k) + k * log_q + k * k * log_p;
  h.log_ratio = -L + (1.0 - k) * log_q + (k - k * k) * log_p;
  return h;
}

double square_log_expected(std::uint64_t n, std::uint64_t k, const GeometricRate& rate) {
  const double kk = static_cast<double>(k);
  if (k > n) return -std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(n + 1 - k)) + kk * rate.log_q() + kk * kk * rate.log_p();
}

double square_log_ratio(std::uint64_t n, std::uint64_t k, const GeometricRate& rate) {
  const double kk = static_cast<double>(k);
  return -std::log(static_cast<double>(n)) + (1.0 - kk) * rate.log_q() +
         (kk - kk * kk) * rate.log_p();
}

}  // namespace compevo
