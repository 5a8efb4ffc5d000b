#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace sleeppe::ordinal {

inline constexpr int kMaxOrder = 12;

enum class TieRule {
  StableRank,  // equal values: the earlier position gets the smaller rank
  Noise,       // add seeded perturbations of at most 1e-12 * (max - min), then StableRank
};

struct PatternParams {
  int order_m = 3;
  int delay_tau = 1;
  TieRule tie_rule = TieRule::StableRank;
  std::uint64_t noise_seed = 0;

  // Throws InvalidParams unless 2 <= order_m <= 12 and delay_tau >= 1.
  void validate() const;
  // n - (m - 1) tau; throws SeriesTooShort when that is below 1.
  std::size_t tuple_count(std::size_t series_length) const;
};

std::uint64_t factorial(int m);

// ranks[i] is the rank (1 = smallest) of the i-th tuple element; lex_index is
// the position of `ranks` among all permutations of 1..m in lexicographic order.
struct OrdinalPattern {
  std::vector<int> ranks;
  std::uint64_t lex_index = 0;
};

std::uint64_t lex_index_of(std::span<const int> ranks);
std::vector<int> ranks_of_lex_index(std::uint64_t lex_index, int m);

// Throws WrongTupleLength when tuple.size() != params.order_m.
OrdinalPattern encode_pattern(std::span<const double> tuple, const PatternParams& params);

// Counts of each ordinal pattern. Storage is a dense m!-array for m <= 9 and a
// sparse map above that; count() and nonzero() work for both.
class OrdinalDistribution {
 public:
  explicit OrdinalDistribution(const PatternParams& params);

  const PatternParams& params() const noexcept { return params_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t num_patterns() const noexcept { return factorial(params_.order_m); }

  std::uint64_t count(std::uint64_t lex_index) const;
  void add(std::uint64_t lex_index, std::uint64_t n = 1);

  // (lex_index, count) for every pattern seen, ascending by index.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzero() const;
  // p_j = count_j / total for every pattern seen, ascending by index.
  std::vector<double> probabilities() const;

  // Counts add; requires equal (m, tau).
  OrdinalDistribution& operator+=(const OrdinalDistribution& other);
  friend bool operator==(const OrdinalDistribution& a, const OrdinalDistribution& b);

 private:
  PatternParams params_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> dense_;
  std::map<std::uint64_t, std::uint64_t> sparse_;
};

// One pattern per tuple (x_j, x_{j+tau}, ..., x_{j+(m-1)tau}), j = 0..k-1.
OrdinalDistribution pattern_distribution(std::span<const double> series, const PatternParams& params);

// -sum p log2 p over p > 0, in bits. Throws NotADistribution when any p is
// negative or the sum is more than 1e-9 away from 1.
double shannon_entropy(std::span<const double> probabilities);

double permutation_entropy(const OrdinalDistribution& distribution, bool normalized = true);
double permutation_entropy(std::span<const double> series, const PatternParams& params, bool normalized = true);

}  // namespace sleeppe::ordinal
