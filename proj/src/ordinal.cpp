#include "sleeppe/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sleeppe/error.hpp"

namespace sleeppe::ordinal {
namespace {

constexpr int kDenseMaxOrder = 9;

// Uniform in [-1, 1) from the top 53 bits; identical on every platform.
double signed_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

std::vector<double> perturbed(std::span<const double> values, std::uint64_t seed) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double scale = 1e-12 * (*hi - *lo);
  std::mt19937_64 rng(seed);
  for (double& v : out) v += scale * signed_unit(rng);
  return out;
}

// Lehmer code of the ranks vector, read straight off the values: element i
// outranks a later element l exactly when x[l] < x[i] under stable ties.
std::uint64_t lex_index_strided(const double* x, std::size_t stride, int m, const std::uint64_t* weights) {
  std::uint64_t index = 0;
  for (int i = 0; i < m - 1; ++i) {
    const double xi = x[static_cast<std::size_t>(i) * stride];
    std::uint64_t smaller_after = 0;
    for (int l = i + 1; l < m; ++l) smaller_after += x[static_cast<std::size_t>(l) * stride] < xi;
    index += smaller_after * weights[i];
  }
  return index;
}

}  // namespace

void PatternParams::validate() const {
  if (order_m < 2 || order_m > kMaxOrder)
    throw Error(ErrorCode::InvalidParams, "order m must be in 2..12, got " + std::to_string(order_m));
  if (delay_tau < 1) throw Error(ErrorCode::InvalidParams, "delay tau must be >= 1, got " + std::to_string(delay_tau));
}

std::size_t PatternParams::tuple_count(std::size_t series_length) const {
  validate();
  const auto span = static_cast<std::size_t>(order_m - 1) * static_cast<std::size_t>(delay_tau);
  if (series_length <= span)
    throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(series_length) +
                                               " has no tuple for m=" + std::to_string(order_m) +
                                               ", tau=" + std::to_string(delay_tau));
  return series_length - span;
}

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t lex_index_of(std::span<const int> ranks) {
  const int m = static_cast<int>(ranks.size());
  std::uint64_t index = 0;
  for (int i = 0; i < m; ++i) {
    std::uint64_t smaller_after = 0;
    for (int l = i + 1; l < m; ++l) smaller_after += ranks[l] < ranks[i];
    index += smaller_after * factorial(m - 1 - i);
  }
  return index;
}

std::vector<int> ranks_of_lex_index(std::uint64_t lex_index, int m) {
  if (m < 1 || m > kMaxOrder || lex_index >= factorial(m))
    throw Error(ErrorCode::InvalidParams, "lex index out of range");
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  std::vector<int> ranks;
  ranks.reserve(pool.size());
  for (int i = m - 1; i >= 0; --i) {
    const std::uint64_t f = factorial(i);
    const auto pick = static_cast<std::ptrdiff_t>(lex_index / f);
    lex_index %= f;
    ranks.push_back(pool[static_cast<std::size_t>(pick)]);
    pool.erase(pool.begin() + pick);
  }
  return ranks;
}

OrdinalPattern encode_pattern(std::span<const double> tuple, const PatternParams& params) {
  params.validate();
  if (tuple.size() != static_cast<std::size_t>(params.order_m))
    throw Error(ErrorCode::WrongTupleLength, "tuple has " + std::to_string(tuple.size()) +
                                                 " values, order is " + std::to_string(params.order_m));
  std::vector<double> noisy;
  if (params.tie_rule == TieRule::Noise) {
    noisy = perturbed(tuple, params.noise_seed);
    tuple = noisy;
  }
  const int m = params.order_m;
  OrdinalPattern out;
  out.ranks.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int rank = 1;
    for (int l = 0; l < m; ++l)
      rank += tuple[l] < tuple[i] || (l < i && tuple[l] == tuple[i]);
    out.ranks[static_cast<std::size_t>(i)] = rank;
  }
  out.lex_index = lex_index_of(out.ranks);
  return out;
}

OrdinalDistribution::OrdinalDistribution(const PatternParams& params) : params_(params) {
  params_.validate();
  if (params_.order_m <= kDenseMaxOrder) dense_.assign(factorial(params_.order_m), 0);
}

std::uint64_t OrdinalDistribution::count(std::uint64_t lex_index) const {
  if (!dense_.empty()) return lex_index < dense_.size() ? dense_[lex_index] : 0;
  const auto it = sparse_.find(lex_index);
  return it == sparse_.end() ? 0 : it->second;
}

void OrdinalDistribution::add(std::uint64_t lex_index, std::uint64_t n) {
  if (lex_index >= num_patterns()) throw Error(ErrorCode::InvalidParams, "pattern index out of range");
  if (!dense_.empty())
    dense_[lex_index] += n;
  else
    sparse_[lex_index] += n;
  total_ += n;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> OrdinalDistribution::nonzero() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (!dense_.empty()) {
    for (std::uint64_t i = 0; i < dense_.size(); ++i)
      if (dense_[i]) out.emplace_back(i, dense_[i]);
  } else {
    for (const auto& [i, c] : sparse_)
      if (c) out.emplace_back(i, c);
  }
  return out;
}

std::vector<double> OrdinalDistribution::probabilities() const {
  std::vector<double> p;
  const double k = static_cast<double>(total_);
  for (const auto& [index, c] : nonzero()) p.push_back(static_cast<double>(c) / k);
  return p;
}

OrdinalDistribution& OrdinalDistribution::operator+=(const OrdinalDistribution& other) {
  if (other.params_.order_m != params_.order_m || other.params_.delay_tau != params_.delay_tau)
    throw Error(ErrorCode::InvalidParams, "cannot merge distributions with different (m, tau)");
  for (const auto& [i, c] : other.nonzero()) add(i, c);
  return *this;
}

bool operator==(const OrdinalDistribution& a, const OrdinalDistribution& b) {
  return a.params_.order_m == b.params_.order_m && a.params_.delay_tau == b.params_.delay_tau &&
         a.total_ == b.total_ && a.nonzero() == b.nonzero();
}

OrdinalDistribution pattern_distribution(std::span<const double> series, const PatternParams& params) {
  const std::size_t k = params.tuple_count(series.size());
  std::vector<double> noisy;
  if (params.tie_rule == TieRule::Noise) {
    noisy = perturbed(series, params.noise_seed);
    series = noisy;
  }
  const int m = params.order_m;
  const auto tau = static_cast<std::size_t>(params.delay_tau);
  std::uint64_t weights[kMaxOrder];
  for (int i = 0; i < m; ++i) weights[i] = factorial(m - 1 - i);

  OrdinalDistribution dist(params);
  if (m <= kDenseMaxOrder) {
    std::vector<std::uint64_t> counts(factorial(m), 0);
    for (std::size_t j = 0; j < k; ++j) ++counts[lex_index_strided(series.data() + j, tau, m, weights)];
    for (std::uint64_t i = 0; i < counts.size(); ++i)
      if (counts[i]) dist.add(i, counts[i]);
  } else {
    for (std::size_t j = 0; j < k; ++j) dist.add(lex_index_strided(series.data() + j, tau, m, weights));
  }
  return dist;
}

double shannon_entropy(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::NotADistribution, "empty probability vector");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::NotADistribution, "probability " + std::to_string(p) + " is not in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::NotADistribution, "probabilities sum to " + std::to_string(sum));
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log2(p);
  return std::max(h, 0.0);
}

double permutation_entropy(const OrdinalDistribution& distribution, bool normalized) {
  const double h = shannon_entropy(distribution.probabilities());
  if (!normalized) return std::min(h, std::log2(static_cast<double>(distribution.num_patterns())));
  return std::clamp(h / std::log2(static_cast<double>(distribution.num_patterns())), 0.0, 1.0);
}

double permutation_entropy(std::span<const double> series, const PatternParams& params, bool normalized) {
  return permutation_entropy(pattern_distribution(series, params), normalized);
}

}  // namespace sleeppe::ordinal
