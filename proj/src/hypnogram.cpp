#include "sleeppe/hypnogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "sleeppe/error.hpp"
#include "text_util.hpp"

namespace sleeppe {
namespace {

using detail::trim;

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

double parse_seconds(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v))
    throw Error(ErrorCode::MalformedInput,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  return v;
}

// "hh:mm:ss" or "hh.mm.ss" -> seconds of day; nullopt if the field is not a clock time.
std::optional<int> parse_clock(std::string_view field) {
  field = trim(field);
  const char sep = field.find(':') != std::string_view::npos ? ':' : '.';
  const auto parts = detail::split(field, sep);
  if (parts.size() != 3) return std::nullopt;
  int v[3];
  for (int i = 0; i < 3; ++i) {
    const auto p = trim(parts[i]);
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v[i]);
    if (p.empty() || ec != std::errc() || ptr != p.data() + p.size()) return std::nullopt;
  }
  if (v[0] < 0 || v[0] > 23 || v[1] < 0 || v[1] > 59 || v[2] < 0 || v[2] > 60) return std::nullopt;
  return v[0] * 3600 + v[1] * 60 + v[2];
}

struct RawRow {
  double onset_s;
  std::optional<SleepStage> stage;
  std::size_t line_no;
};

Hypnogram build(const std::vector<RawRow>& rows, double epoch_len_s) {
  if (rows.empty()) throw Error(ErrorCode::EmptyHypnogram, "no sleep-stage epochs found");
  const double origin = rows.front().onset_s;
  constexpr double kTol = 1e-6;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].onset_s > rows[i - 1].onset_s))
      throw Error(ErrorCode::NonMonotoneOnsets, "line " + std::to_string(rows[i].line_no) + ": onset " +
                                                    std::to_string(rows[i].onset_s) + " not after " +
                                                    std::to_string(rows[i - 1].onset_s));
    const double steps = (rows[i].onset_s - origin) / epoch_len_s;
    if (std::abs(steps - std::round(steps)) * epoch_len_s > kTol)
      throw Error(ErrorCode::MisalignedOnset, "line " + std::to_string(rows[i].line_no) + ": onset " +
                                                  std::to_string(rows[i].onset_s) +
                                                  " is off the epoch grid");
  }
  std::vector<HypnogramEpoch> epochs;
  epochs.reserve(rows.size());
  for (const auto& r : rows)
    if (r.stage) epochs.push_back({r.onset_s, *r.stage});
  if (epochs.empty()) throw Error(ErrorCode::EmptyHypnogram, "every epoch is unscored");
  return Hypnogram(std::move(epochs), epoch_len_s);
}

Hypnogram parse_tsv(std::string_view text, const HypnogramOptions& options) {
  std::vector<RawRow> rows;
  const auto all = detail::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto line = trim(all[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() < 2)
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(i + 1) + ": expected onset<TAB>stage");
    rows.push_back({parse_seconds(fields[0], i + 1), normalize_stage_label(fields[1]), i + 1});
  }
  return build(rows, options.epoch_len_s);
}

struct CapColumns {
  std::size_t time = 1, event = 2, duration = 3;
};

std::optional<CapColumns> cap_header(std::string_view line) {
  const auto fields = detail::split(line, '\t');
  std::optional<std::size_t> time, event, duration;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string f = upper(trim(fields[i]));
    if (f.starts_with("TIME")) time = i;
    else if (f.starts_with("EVENT")) event = i;
    else if (f.starts_with("DURATION")) duration = i;
  }
  if (!time || !event || !duration) return std::nullopt;
  return CapColumns{*time, *event, *duration};
}

Hypnogram parse_cap(std::string_view text, const HypnogramOptions& options) {
  const auto all = detail::lines(text);
  std::optional<CapColumns> cols;
  std::vector<RawRow> rows;
  std::optional<double> origin;
  double previous = 0.0;

  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto line = trim(all[i]);
    if (line.empty()) continue;
    if (!cols) {
      cols = cap_header(line);
      continue;
    }
    const auto fields = detail::split(line, '\t');
    const std::size_t needed = std::max({cols->time, cols->event, cols->duration});
    if (fields.size() <= needed) continue;

    const std::string event = upper(trim(fields[cols->event]));
    if (!event.starts_with("SLEEP-")) continue;  // CAP phases and other events
    const auto clock = parse_clock(fields[cols->time]);
    if (!clock)
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(i + 1) + ": bad clock time '" +
                                                 std::string(trim(fields[cols->time])) + "'");
    const double duration = parse_seconds(fields[cols->duration], i + 1);
    if (std::abs(duration - options.epoch_len_s) > 1e-9) continue;

    if (!origin) {
      origin = options.recording_start_s_of_day ? static_cast<double>(*options.recording_start_s_of_day)
                                                 : static_cast<double>(*clock);
      previous = std::fmod(*clock - *origin + 86400.0, 86400.0);
    }
    // Unwrap clock times across midnight.
    double onset = *clock - *origin;
    while (onset < previous - 43200.0) onset += 86400.0;
    while (onset > previous + 43200.0) onset -= 86400.0;
    previous = onset;

    rows.push_back({onset, normalize_stage_label(event), i + 1});
  }
  if (!cols) throw Error(ErrorCode::MalformedInput, "no CAP scoring table header found");
  return build(rows, options.epoch_len_s);
}

}  // namespace

std::optional<SleepStage> stage_from_value(int value) noexcept {
  if (value < 0 || value > 5) return std::nullopt;
  return static_cast<SleepStage>(value);
}

std::string_view stage_label(SleepStage stage) noexcept {
  switch (stage) {
    case SleepStage::S4: return "S4";
    case SleepStage::S3: return "S3";
    case SleepStage::S2: return "S2";
    case SleepStage::S1: return "S1";
    case SleepStage::REM: return "R";
    case SleepStage::WAKE: return "W";
  }
  return "?";
}

std::optional<SleepStage> normalize_stage_label(std::string_view label) {
  std::string key = upper(trim(label));
  if (key.starts_with("SLEEP-")) key.erase(0, 6);
  if (key == "W" || key == "WAKE" || key == "0" || key == "S0") return SleepStage::WAKE;
  if (key == "R" || key == "REM") return SleepStage::REM;
  if (key == "S1" || key == "1") return SleepStage::S1;
  if (key == "S2" || key == "2") return SleepStage::S2;
  if (key == "S3" || key == "3") return SleepStage::S3;
  if (key == "S4" || key == "4") return SleepStage::S4;
  if (key == "MT" || key == "M" || key == "?" || key == "UNSCORED" || key == "U")
    return std::nullopt;
  throw Error(ErrorCode::UnknownStageLabel, "unknown sleep stage label '" + std::string(trim(label)) + "'");
}

Hypnogram::Hypnogram(std::vector<HypnogramEpoch> epochs, double epoch_len_s)
    : epochs_(std::move(epochs)), epoch_len_s_(epoch_len_s) {
  if (!(epoch_len_s_ > 0.0)) throw Error(ErrorCode::InvalidParams, "epoch length must be positive");
  if (epochs_.empty()) throw Error(ErrorCode::EmptyHypnogram, "hypnogram has no epochs");
  for (std::size_t i = 1; i < epochs_.size(); ++i)
    if (!(epochs_[i].onset_s > epochs_[i - 1].onset_s))
      throw Error(ErrorCode::NonMonotoneOnsets, "epoch " + std::to_string(i) + " onset not increasing");
}

Hypnogram parse_hypnogram(std::string_view text, HypnogramFormat format, const HypnogramOptions& options) {
  if (!(options.epoch_len_s > 0.0)) throw Error(ErrorCode::InvalidParams, "epoch length must be positive");
  return format == HypnogramFormat::Tsv ? parse_tsv(text, options) : parse_cap(text, options);
}

std::vector<StagedPe> align(const Hypnogram& hypnogram, std::span<const EpochPe> windows, double tolerance_s) {
  std::vector<StagedPe> out;
  const auto& epochs = hypnogram.epochs();
  std::size_t e = 0;
  for (const auto& w : windows) {
    while (e < epochs.size() && epochs[e].onset_s < w.start_time_s - tolerance_s) ++e;
    if (e == epochs.size()) break;
    if (std::abs(epochs[e].onset_s - w.start_time_s) <= tolerance_s)
      out.push_back({epochs[e].stage, w.epoch_index, w.start_time_s, w.pe});
  }
  if (out.empty()) throw Error(ErrorCode::NoOverlap, "hypnogram and signal windows share no epoch");
  return out;
}

}  // namespace sleeppe
