#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sleeppe/dsp.hpp"
#include "sleeppe/hypnogram.hpp"
#include "sleeppe/ordinal.hpp"

namespace sleeppe::analysis {

struct EpochPeSeries {
  std::vector<EpochPe> entries;
  ordinal::PatternParams params;
};

// Normalized PE of every window. All windows must share one length.
EpochPeSeries epoch_pe(std::span<const dsp::EpochWindow> windows, const ordinal::PatternParams& params);

// Throws LengthMismatch (unequal or < 2 values) or ZeroVariance.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

// Pearson on average ranks; used only as a sensitivity check.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

// Linear interpolation between order statistics at zero-based position (n - 1) q.
// `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

struct BoxStats {
  std::size_t n = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest datum >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest datum <= q3 + 1.5 IQR
  std::vector<double> outliers;  // ascending
};

inline constexpr double kWhiskerIqrFactor = 1.5;

// Throws EmptyInput on an empty sample.
BoxStats box_stats(std::span<const double> data);

struct StageBoxplot {
  SleepStage stage = SleepStage::WAKE;
  BoxStats stats;
};

// One entry per stage present in `pairs`, ordered S4, S3, S2, S1, R, W.
std::vector<StageBoxplot> stage_boxplots(std::span<const StagedPe> pairs);

// True iff the medians of the present stages among S4, S3, S2, S1, W are
// non-decreasing in that order (REM is left out). nullopt when fewer than two
// of those stages are present.
std::optional<bool> monotonicity_check(std::span<const StageBoxplot> boxplots);

}  // namespace sleeppe::analysis
