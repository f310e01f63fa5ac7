#include "compevo/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "compevo/core.hpp"

namespace compevo {

IntervalKind parse_interval_kind(const std::string& text) {
  if (text == "wilson") return IntervalKind::Wilson;
  if (text == "clopper-pearson" || text == "clopper_pearson") return IntervalKind::ClopperPearson;
  throw UsageError("unknown interval kind: " + text + " (expected wilson or clopper-pearson)");
}

std::string to_string(IntervalKind kind) {
  return kind == IntervalKind::Wilson ? "wilson" : "clopper-pearson";
}

double z_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must lie in (0, 1)");
  static const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + confidence / 2.0);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw UsageError("interval needs trials >= 1");
  const double z = z_value(confidence);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  // The Wilson interval always contains phat; clamp away rounding.
  return {std::clamp(std::min(centre - half, phat), 0.0, 1.0),
          std::clamp(std::max(centre + half, phat), 0.0, 1.0)};
}

Interval clopper_pearson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw UsageError("interval needs trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must lie in (0, 1)");
  const double alpha = 1.0 - confidence;
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval out{0.0, 1.0};
  if (successes > 0) {
    out.lo = boost::math::quantile(boost::math::beta_distribution<double>(x, n - x + 1.0), alpha / 2.0);
  }
  if (successes < trials) {
    out.hi = boost::math::quantile(boost::math::beta_distribution<double>(x + 1.0, n - x),
                                   1.0 - alpha / 2.0);
  }
  return out;
}

Interval binomial_interval(IntervalKind kind, std::uint64_t successes, std::uint64_t trials,
                           double confidence) {
  return kind == IntervalKind::Wilson ? wilson_interval(successes, trials, confidence)
                                      : clopper_pearson_interval(successes, trials, confidence);
}

Interval normal_interval(double mean, double sd, std::uint64_t trials, double confidence) {
  if (trials == 0) throw UsageError("interval needs trials >= 1");
  const double half = z_value(confidence) * sd / std::sqrt(static_cast<double>(trials));
  return {mean - half, mean + half};
}

double chi_square_survival(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& probabilities, double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw UsageError("chi-square: observed and expected must have the same nonzero length");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  if (total == 0.0) throw UsageError("chi-square: no observations");

  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += probabilities[i] * total;
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  ChiSquareResult r;
  r.bins = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  r.dof = r.bins > 1 ? r.bins - 1 : 0;
  r.p_value = chi_square_survival(r.statistic, static_cast<double>(r.dof));
  return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b, double min_expected) {
  const std::size_t bins = std::max(a.size(), b.size());
  double na = 0.0, nb = 0.0;
  for (auto x : a) na += static_cast<double>(x);
  for (auto x : b) nb += static_cast<double>(x);
  if (na == 0.0 || nb == 0.0) throw UsageError("chi-square: empty sample");
  const double wa = na / (na + nb);
  const double wb = nb / (na + nb);

  std::vector<double> ma, mb;
  double acc_a = 0.0, acc_b = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    acc_a += i < a.size() ? static_cast<double>(a[i]) : 0.0;
    acc_b += i < b.size() ? static_cast<double>(b[i]) : 0.0;
    const double pooled = acc_a + acc_b;
    if (pooled * std::min(wa, wb) >= min_expected) {
      ma.push_back(acc_a);
      mb.push_back(acc_b);
      acc_a = acc_b = 0.0;
    }
  }
  if (acc_a + acc_b > 0.0) {
    if (ma.empty()) {
      ma.push_back(acc_a);
      mb.push_back(acc_b);
    } else {
      ma.back() += acc_a;
      mb.back() += acc_b;
    }
  }
  ChiSquareResult r;
  r.bins = ma.size();
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double pooled = ma[i] + mb[i];
    const double ea = pooled * wa;
    const double eb = pooled * wb;
    if (ea > 0.0) r.statistic += (ma[i] - ea) * (ma[i] - ea) / ea;
    if (eb > 0.0) r.statistic += (mb[i] - eb) * (mb[i] - eb) / eb;
  }
  r.dof = r.bins > 1 ? r.bins - 1 : 0;
  r.p_value = chi_square_survival(r.statistic, static_cast<double>(r.dof));
  return r;
}

double poisson_pmf(std::uint64_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(mean) - mean - boost::math::lgamma(kk + 1.0));
}

double total_variation_to_poisson(const std::vector<std::uint64_t>& histogram, double mean) {
  double total = 0.0;
  for (auto h : histogram) total += static_cast<double>(h);
  if (total == 0.0) throw UsageError("empty histogram");
  double tv = 0.0;
  double covered = 0.0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    const double pk = poisson_pmf(k, mean);
    covered += pk;
    tv += std::fabs(static_cast<double>(histogram[k]) / total - pk);
  }
  tv += std::max(0.0, 1.0 - covered);  // Poisson mass beyond the histogram
  return tv / 2.0;
}

}  // namespace compevo
