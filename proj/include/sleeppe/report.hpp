#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sleeppe/analysis.hpp"
#include "sleeppe/hypnogram.hpp"

namespace sleeppe::report {

struct ReportParams {
  int order_m = 3;
  int delay_tau = 1;
  std::string tie_rule = "stable-rank";
  std::uint64_t noise_seed = 0;
  std::string target_rate_hz = "200";
  double cutoff_hz = 30.0;
  int num_taps = 201;
  double epoch_seconds = 30.0;
  bool merge_s3_s4 = false;
};

struct AnalysisReport {
  std::string patient_id;
  std::string channel_label;
  std::string edf_file;
  std::string hypnogram_file;
  std::string source_rate_hz;
  ReportParams params;
  std::size_t num_windows = 0;
  std::size_t num_hypnogram_epochs = 0;
  std::vector<StagedPe> pairs;
  std::optional<double> correlation;  // Pearson(stage value, PE); unset for a constant series
  std::optional<double> spearman;
  std::vector<analysis::StageBoxplot> per_stage;
  std::optional<bool> monotonic;
  double pe_min = 0.0;
  double pe_max = 0.0;
};

// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

// Key-value tree (JSON, two-space indent, fixed key order, trailing newline).
std::string to_report_text(const AnalysisReport& report);
// Throws MalformedInput.
AnalysisReport parse_report(std::string_view text);

// index,start_s,stage,pe
std::string epoch_csv(const AnalysisReport& report);

// stage,value,n,q1,median,q3,whisker_low,whisker_high,num_outliers,outliers
std::string boxplot_csv(std::span<const analysis::StageBoxplot> boxplots);

// Boxplot figure with fixed 640x400 viewport. Each stage is a <g> carrying its
// numeric fields as data-* attributes; outliers are red '+' marks.
std::string boxplot_svg(std::span<const analysis::StageBoxplot> boxplots, std::string_view title);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace sleeppe::report
