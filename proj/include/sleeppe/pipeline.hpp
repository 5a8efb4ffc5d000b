#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sleeppe/dsp.hpp"
#include "sleeppe/edf.hpp"
#include "sleeppe/hypnogram.hpp"
#include "sleeppe/ordinal.hpp"
#include "sleeppe/rational.hpp"
#include "sleeppe/report.hpp"

namespace sleeppe {

// Defaults are the published sleep-staging setup: m = 3, tau = 1, 200 Hz,
// 30 Hz low-pass, 30 s epochs, Fp2-F4 with C3-A2 as fallback.
struct RunConfig {
  std::filesystem::path edf_path;
  std::filesystem::path hypnogram_path;
  std::optional<HypnogramFormat> hypnogram_format;  // unset: ".tsv" -> tsv, else CAP text
  std::string channel = "Fp2-F4";
  std::vector<std::string> fallback_channels = {"C3-A2"};
  int order_m = 3;
  int delay_tau = 1;
  ordinal::TieRule tie_rule = ordinal::TieRule::StableRank;
  std::uint64_t noise_seed = 0;
  Rational target_rate_hz = Rational(200);
  double cutoff_hz = 30.0;
  int num_taps = 201;
  double epoch_len_s = 30.0;
  bool merge_s3_s4 = false;
  std::string patient_id;  // empty: EDF file stem

  ordinal::PatternParams pattern_params() const;
};

// First of [channel, fallbacks...] that names a signal in the recording.
// Throws UnknownChannel listing everything tried.
std::string select_channel(const edf::EdfRecording& recording, const RunConfig& config);

// resample -> low-pass -> restrict to the scored range -> window -> PE ->
// align with the hypnogram -> correlation and per-stage statistics.
report::AnalysisReport run_analysis(const edf::EdfRecording& recording, const Hypnogram& hypnogram,
                                    const RunConfig& config);

// Loads both files named in the config and runs the analysis.
report::AnalysisReport run_analysis(const RunConfig& config);

}  // namespace sleeppe
