#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sleeppe {

// Rechtschaffen & Kales stages, declared in ascending numeric value.
enum class SleepStage { S4, S3, S2, S1, REM, WAKE };

inline constexpr std::array<SleepStage, 6> kAllStages = {
    SleepStage::S4, SleepStage::S3, SleepStage::S2, SleepStage::S1, SleepStage::REM, SleepStage::WAKE};

// S4 -> 0, S3 -> 1, S2 -> 2, S1 -> 3, REM -> 4, WAKE -> 5.
constexpr int stage_value(SleepStage stage) noexcept { return static_cast<int>(stage); }

std::optional<SleepStage> stage_from_value(int value) noexcept;

// Short label: "S4", "S3", "S2", "S1", "R", "W".
std::string_view stage_label(SleepStage stage) noexcept;

// Normalizes a scoring label. Returns nullopt for labels that name an
// epoch without a stage value (movement time, unscored); throws
// UnknownStageLabel for anything else it does not recognize.
std::optional<SleepStage> normalize_stage_label(std::string_view label);

struct HypnogramEpoch {
  double onset_s = 0.0;  // seconds from recording start
  SleepStage stage = SleepStage::WAKE;
};

// Onsets are strictly increasing and lie on the grid first_onset + j * epoch_len_s.
// Gaps are allowed where epochs without a stage value were dropped.
class Hypnogram {
 public:
  Hypnogram(std::vector<HypnogramEpoch> epochs, double epoch_len_s = 30.0);

  const std::vector<HypnogramEpoch>& epochs() const noexcept { return epochs_; }
  double epoch_len_s() const noexcept { return epoch_len_s_; }
  std::size_t size() const noexcept { return epochs_.size(); }
  double first_onset_s() const noexcept { return epochs_.front().onset_s; }
  double end_s() const noexcept { return epochs_.back().onset_s + epoch_len_s_; }

 private:
  std::vector<HypnogramEpoch> epochs_;
  double epoch_len_s_;
};

enum class HypnogramFormat { Tsv, CapTxt };

struct HypnogramOptions {
  double epoch_len_s = 30.0;
  // Clock time of the EDF recording start, in seconds of the day. CAP scoring
  // files carry clock times; when this is unset the first stage row becomes
  // the time origin.
  std::optional<int> recording_start_s_of_day;
};

Hypnogram parse_hypnogram(std::string_view text, HypnogramFormat format,
                          const HypnogramOptions& options = {});

// Per-window PE value tagged with its window start time.
struct EpochPe {
  std::size_t epoch_index = 0;
  double start_time_s = 0.0;
  double pe = 0.0;
};

struct StagedPe {
  SleepStage stage = SleepStage::WAKE;
  std::size_t epoch_index = 0;
  double start_time_s = 0.0;
  double pe = 0.0;

  int value() const noexcept { return stage_value(stage); }
};

// Keeps the windows whose start time coincides with a hypnogram onset
// (within tolerance_s). Throws NoOverlap when nothing pairs up.
std::vector<StagedPe> align(const Hypnogram& hypnogram, std::span<const EpochPe> windows,
                            double tolerance_s = 1e-6);

}  // namespace sleeppe
