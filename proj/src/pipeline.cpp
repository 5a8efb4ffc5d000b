#include "sleeppe/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "sleeppe/analysis.hpp"
#include "sleeppe/error.hpp"

namespace sleeppe {

ordinal::PatternParams RunConfig::pattern_params() const {
  ordinal::PatternParams p;
  p.order_m = order_m;
  p.delay_tau = delay_tau;
  p.tie_rule = tie_rule;
  p.noise_seed = noise_seed;
  p.validate();
  return p;
}

std::string select_channel(const edf::EdfRecording& recording, const RunConfig& config) {
  std::string tried;
  std::vector<std::string> candidates{config.channel};
  candidates.insert(candidates.end(), config.fallback_channels.begin(), config.fallback_channels.end());
  for (const auto& c : candidates) {
    if (c.empty()) continue;
    if (recording.has_channel(c)) return c;
    tried += (tried.empty() ? "" : ", ") + c;
  }
  throw Error(ErrorCode::UnknownChannel, "none of the requested channels is present: " + tried);
}

report::AnalysisReport run_analysis(const edf::EdfRecording& recording, const Hypnogram& hypnogram,
                                    const RunConfig& config) {
  const auto params = config.pattern_params();
  if (!(config.epoch_len_s > 0.0)) throw Error(ErrorCode::InvalidParams, "epoch length must be positive");
  if (std::abs(hypnogram.epoch_len_s() - config.epoch_len_s) > 1e-9)
    throw Error(ErrorCode::InvalidParams, "hypnogram epoch length differs from the analysis epoch length");

  const double samples_per_epoch = config.epoch_len_s * config.target_rate_hz.value();
  if (std::abs(samples_per_epoch - std::round(samples_per_epoch)) > 1e-9 || samples_per_epoch < 1.0)
    throw Error(ErrorCode::InvalidParams, "epoch length is not a whole number of samples at the target rate");
  const auto epoch_samples = static_cast<std::size_t>(std::llround(samples_per_epoch));

  const std::string channel = select_channel(recording, config);
  const SampledSignal raw = recording.read_channel(channel);
  const SampledSignal resampled = dsp::resample(raw, config.target_rate_hz);
  const SampledSignal filtered =
      dsp::lowpass(resampled, dsp::FilterSpec{config.cutoff_hz, config.num_taps, dsp::WindowKind::Hamming});

  // Restrict to the scored range, starting on the first hypnogram grid point
  // at or after the recording start.
  const double len = hypnogram.epoch_len_s();
  double origin = hypnogram.first_onset_s();
  if (origin < 0.0) origin += std::ceil(-origin / len) * len;
  const double rate = filtered.rate();
  const auto first = static_cast<std::size_t>(std::llround(origin * rate));
  const auto last = static_cast<std::size_t>(std::max(0.0, std::floor(hypnogram.end_s() * rate + 1e-9)));
  if (first >= filtered.samples.size() || last <= first)
    throw Error(ErrorCode::NoOverlap, "hypnogram does not cover any part of the recording");
  const SampledSignal scored = dsp::slice(filtered, first, last - first);
  if (scored.samples.size() < epoch_samples)
    throw Error(ErrorCode::NoOverlap, "scored range is shorter than one epoch");

  const double time_origin = static_cast<double>(first) / rate;
  const auto windows = dsp::window(scored, epoch_samples, time_origin);
  const auto series = analysis::epoch_pe(windows, params);

  Hypnogram staged = hypnogram;
  if (config.merge_s3_s4) {
    auto epochs = hypnogram.epochs();
    for (auto& e : epochs)
      if (e.stage == SleepStage::S4) e.stage = SleepStage::S3;
    staged = Hypnogram(std::move(epochs), len);
  }
  const auto pairs = align(staged, series.entries, 0.5 / rate);

  report::AnalysisReport r;
  r.patient_id = config.patient_id.empty() ? config.edf_path.stem().string() : config.patient_id;
  r.channel_label = channel;
  r.edf_file = config.edf_path.filename().string();
  r.hypnogram_file = config.hypnogram_path.filename().string();
  r.source_rate_hz = raw.sample_rate_hz.to_string();
  r.params.order_m = config.order_m;
  r.params.delay_tau = config.delay_tau;
  r.params.tie_rule = config.tie_rule == ordinal::TieRule::StableRank ? "stable-rank" : "noise";
  r.params.noise_seed = config.noise_seed;
  r.params.target_rate_hz = config.target_rate_hz.to_string();
  r.params.cutoff_hz = config.cutoff_hz;
  r.params.num_taps = config.num_taps;
  r.params.epoch_seconds = config.epoch_len_s;
  r.params.merge_s3_s4 = config.merge_s3_s4;
  r.num_windows = windows.size();
  r.num_hypnogram_epochs = hypnogram.size();
  r.pairs = pairs;

  std::vector<double> values, pe;
  for (const auto& p : pairs) {
    values.push_back(p.value());
    pe.push_back(p.pe);
  }
  try {
    r.correlation = analysis::pearson_correlation(values, pe);
    r.spearman = analysis::spearman_correlation(values, pe);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroVariance && e.code() != ErrorCode::LengthMismatch) throw;
  }
  r.per_stage = analysis::stage_boxplots(pairs);
  r.monotonic = analysis::monotonicity_check(r.per_stage);
  r.pe_min = *std::min_element(pe.begin(), pe.end());
  r.pe_max = *std::max_element(pe.begin(), pe.end());
  return r;
}

report::AnalysisReport run_analysis(const RunConfig& config) {
  const auto recording = edf::EdfRecording::open(config.edf_path);
  const std::string text = report::read_file(config.hypnogram_path);
  const HypnogramFormat format =
      config.hypnogram_format.value_or(config.hypnogram_path.extension() == ".tsv" ? HypnogramFormat::Tsv
                                                                                    : HypnogramFormat::CapTxt);
  HypnogramOptions options;
  options.epoch_len_s = config.epoch_len_s;
  options.recording_start_s_of_day = recording.header().start.seconds_of_day();
  const Hypnogram hypnogram = parse_hypnogram(text, format, options);
  return run_analysis(recording, hypnogram, config);
}

}  // namespace sleeppe
