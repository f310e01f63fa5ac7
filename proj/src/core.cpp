#include "compevo/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace compevo {

Composition::Composition(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw UsageError("composition must have at least one term");
}

Composition::Composition(std::initializer_list<Term> terms)
    : Composition(std::vector<Term>(terms)) {}

Composition Composition::zeros(std::size_t n) {
  return Composition(std::vector<Term>(n, 0));
}

Term Composition::size() const {
  return std::accumulate(terms_.begin(), terms_.end(), Term{0});
}

Composition Composition::incremented(std::size_t j) const {
  auto terms = terms_;
  terms.at(j) += 1;
  return Composition(std::move(terms));
}

Term composition_size(const Composition& c) { return c.size(); }

BigInt count_compositions(std::uint64_t n, std::uint64_t m) {
  if (n == 0) return m == 0 ? BigInt(1) : BigInt(0);
  // binom(m + n - 1, k) with k = min(m, n - 1), built incrementally so every
  // intermediate value is an exact integer.
  const std::uint64_t k = std::min<std::uint64_t>(m, n - 1);
  const BigInt top = BigInt(m) + BigInt(n) - 1;
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= top - k + i;
    result /= i;
  }
  return result;
}

GeometricRate GeometricRate::from_p(double p) {
  if (!(p >= 0.0) || !(p < 1.0)) {
    throw UsageError("geometric model needs 0 <= p < 1 (got p=" + std::to_string(p) + ")");
  }
  return GeometricRate{p, 1.0 - p};
}

GeometricRate GeometricRate::from_q(double q) {
  if (!(q > 0.0) || !(q <= 1.0)) {
    throw UsageError("geometric model needs 0 < q <= 1 (got q=" + std::to_string(q) + ")");
  }
  return GeometricRate{1.0 - q, q};
}

double GeometricRate::log_p() const {
  if (p == 0.0) return -INFINITY;
  return q < 0.5 ? std::log1p(-q) : std::log(p);
}

double GeometricRate::log_q() const {
  return p < 0.5 ? std::log1p(-p) : std::log(q);
}

double GeometricModel::mean_size() const {
  return static_cast<double>(n) * rate.p / rate.q;
}

UniformModel make_uniform(std::uint64_t n, std::uint64_t m) {
  if (n == 0) throw UsageError("uniform model needs n >= 1");
  return UniformModel{n, m};
}

GeometricModel make_geometric(std::uint64_t n, double p) {
  if (n == 0) throw UsageError("geometric model needs n >= 1");
  return GeometricModel{n, GeometricRate::from_p(p)};
}

GeometricModel make_geometric_q(std::uint64_t n, double q) {
  if (n == 0) throw UsageError("geometric model needs n >= 1");
  return GeometricModel{n, GeometricRate::from_q(q)};
}

std::uint64_t model_length(const ModelParams& model) {
  return std::visit([](const auto& m) { return m.n; }, model);
}

std::string describe(const ModelParams& model) {
  std::ostringstream out;
  out.precision(17);
  if (const auto* u = std::get_if<UniformModel>(&model)) {
    out << "C(n=" << u->n << ", m=" << u->m << ")";
  } else {
    const auto& g = std::get<GeometricModel>(model);
    out << "C(n=" << g.n << ", p=" << g.rate.p << ")";
  }
  return out.str();
}

char kind_letter(PatternKind kind) {
  switch (kind) {
    case PatternKind::Exact: return 'e';
    case PatternKind::Upper: return 'u';
    case PatternKind::Lower: return 'l';
    case PatternKind::Ordering: return 'o';
  }
  return '?';
}

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Exact: return "exact";
    case PatternKind::Upper: return "upper";
    case PatternKind::Lower: return "lower";
    case PatternKind::Ordering: return "ordering";
  }
  return "unknown";
}

std::string to_string(PatternStructure structure) {
  switch (structure) {
    case PatternStructure::Consecutive: return "consecutive";
    case PatternStructure::Vincular: return "vincular";
    case PatternStructure::Nonconsecutive: return "nonconsecutive";
  }
  return "unknown";
}

PatternSpec::PatternSpec(PatternKind kind, std::vector<std::vector<Term>> blocks)
    : kind_(kind), blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw UsageError("pattern must have at least one block");
  for (const auto& b : blocks_) {
    if (b.empty()) throw UsageError("pattern blocks must be nonempty");
  }
}

std::size_t PatternSpec::length() const {
  std::size_t k = 0;
  for (const auto& b : blocks_) k += b.size();
  return k;
}

Term PatternSpec::size() const {
  Term s = 0;
  for (const auto& b : blocks_) s = std::accumulate(b.begin(), b.end(), s);
  return s;
}

std::vector<Term> PatternSpec::flat() const {
  std::vector<Term> out;
  out.reserve(length());
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

Term PatternSpec::max_term() const {
  Term r = 0;
  for (const auto& b : blocks_) r = std::max(r, *std::max_element(b.begin(), b.end()));
  return r;
}

bool PatternSpec::all_singletons() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const auto& b) { return b.size() == 1; });
}

PatternStructure PatternSpec::structure() const {
  if (blocks_.size() == 1) return PatternStructure::Consecutive;
  if (all_singletons()) return PatternStructure::Nonconsecutive;
  return PatternStructure::Vincular;
}

std::string PatternSpec::to_string() const {
  std::string out;
  out += kind_letter(kind_);
  out += ':';
  const bool bracket_single = blocks_.size() == 1;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += ',';
    const auto& block = blocks_[b];
    const bool bracket = block.size() > 1 || bracket_single;
    if (bracket) out += '[';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(block[i]);
    }
    if (bracket) out += ']';
  }
  return out;
}

}  // namespace compevo
