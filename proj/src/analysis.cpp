#include "sleeppe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sleeppe/error.hpp"

namespace sleeppe::analysis {

EpochPeSeries epoch_pe(std::span<const dsp::EpochWindow> windows, const ordinal::PatternParams& params) {
  params.validate();
  EpochPeSeries out;
  out.params = params;
  if (windows.empty()) return out;
  const std::size_t width = windows.front().samples.size();
  out.entries.reserve(windows.size());
  for (const auto& w : windows) {
    if (w.samples.size() != width)
      throw Error(ErrorCode::InvalidParams, "window " + std::to_string(w.index) + " has " +
                                                std::to_string(w.samples.size()) + " samples, expected " +
                                                std::to_string(width));
    out.entries.push_back({w.index, w.start_time_s, ordinal::permutation_entropy(w.samples, params, true)});
  }
  return out;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  if (x.size() < 2) throw Error(ErrorCode::LengthMismatch, "need at least two pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_correlation(rx, ry);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> data) {
  if (data.empty()) throw Error(ErrorCode::EmptyInput, "boxplot of an empty sample");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  BoxStats s;
  s.n = sorted.size();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lower_fence = s.q1 - kWhiskerIqrFactor * iqr;
  const double upper_fence = s.q3 + kWhiskerIqrFactor * iqr;

  // The quartiles lie inside the data range, so at least one datum is inside
  // each fence.
  const auto first_in = std::lower_bound(sorted.begin(), sorted.end(), lower_fence);
  const auto last_in = std::upper_bound(sorted.begin(), sorted.end(), upper_fence);
  s.whisker_low = *first_in;
  s.whisker_high = *(last_in - 1);
  s.outliers.assign(sorted.begin(), first_in);
  s.outliers.insert(s.outliers.end(), last_in, sorted.end());
  return s;
}

std::vector<StageBoxplot> stage_boxplots(std::span<const StagedPe> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no aligned epochs");
  std::vector<StageBoxplot> out;
  for (SleepStage stage : kAllStages) {
    std::vector<double> values;
    for (const auto& p : pairs)
      if (p.stage == stage) values.push_back(p.pe);
    if (!values.empty()) out.push_back({stage, box_stats(values)});
  }
  return out;
}

std::optional<bool> monotonicity_check(std::span<const StageBoxplot> boxplots) {
  std::vector<double> medians;
  for (SleepStage stage : {SleepStage::S4, SleepStage::S3, SleepStage::S2, SleepStage::S1, SleepStage::WAKE}) {
    const auto it = std::find_if(boxplots.begin(), boxplots.end(),
                                 [&](const StageBoxplot& b) { return b.stage == stage; });
    if (it != boxplots.end()) medians.push_back(it->stats.median);
  }
  if (medians.size() < 2) return std::nullopt;
  return std::is_sorted(medians.begin(), medians.end());
}

}  // namespace sleeppe::analysis
