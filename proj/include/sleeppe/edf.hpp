#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sleeppe/rational.hpp"
#include "sleeppe/signal.hpp"

namespace sleeppe::edf {

inline constexpr std::size_t kFixedHeaderBytes = 256;
inline constexpr std::size_t kSignalHeaderBytes = 256;
inline constexpr std::string_view kAnnotationLabel = "EDF Annotations";

struct StartDateTime {
  int day = 1;
  int month = 1;
  int year = 1985;  // four-digit; EDF stores yy with 85..99 -> 19yy, else 20yy
  int hour = 0;
  int minute = 0;
  int second = 0;

  int seconds_of_day() const noexcept { return hour * 3600 + minute * 60 + second; }
};

struct EdfHeader {
  std::string version;
  std::string patient_id;
  std::string recording_id;
  StartDateTime start;
  std::int64_t header_bytes = 0;
  std::string reserved;  // "EDF+C" / "EDF+D" for EDF+, blank for plain EDF
  std::int64_t num_data_records = 0;
  Rational record_duration_s;
  int num_signals = 0;
};

struct ChannelMeta {
  std::string label;
  std::string transducer;
  std::string physical_dim;
  double phys_min = 0.0;
  double phys_max = 0.0;
  int dig_min = 0;
  int dig_max = 0;
  std::string prefiltering;
  std::int64_t samples_per_record = 0;
  std::string reserved;

  bool is_annotation() const noexcept { return label == kAnnotationLabel; }
  double to_physical(int digital) const noexcept {
    return (static_cast<double>(digital) - dig_min) * (phys_max - phys_min) /
               (static_cast<double>(dig_max) - dig_min) +
           phys_min;
  }
};

struct ParsedHeader {
  EdfHeader header;
  std::vector<ChannelMeta> channels;
};

struct ChannelInfo {
  std::string label;
  Rational sample_rate_hz;
  bool is_annotation = false;
};

// Decodes the fixed header and the per-signal metadata block. Throws Error
// (TruncatedHeader, NonNumericField, UnsupportedVariant, InvalidHeader).
ParsedHeader parse_header(std::span<const std::uint8_t> bytes);

// Re-emits the 256 + 256 * ns octet ASCII layout. Numeric fields are written
// in their shortest decimal form, so the output matches a file written with
// canonical numbers byte for byte.
std::string serialize_header(const ParsedHeader& parsed);

// A parsed EDF file. Samples are read lazily per channel; the object is
// immutable and read_channel() may be called concurrently.
class EdfRecording {
 public:
  static EdfRecording open(const std::filesystem::path& path);
  static EdfRecording from_bytes(std::vector<std::uint8_t> bytes);

  const EdfHeader& header() const noexcept { return parsed_.header; }
  const std::vector<ChannelMeta>& channels() const noexcept { return parsed_.channels; }

  std::vector<ChannelInfo> list_channels() const;

  // Exact, case-sensitive match on the trimmed label; annotation channels
  // never match. Throws UnknownChannel, AmbiguousChannel or TruncatedData.
  SampledSignal read_channel(std::string_view label) const;

  bool has_channel(std::string_view label) const;

 private:
  struct Source;

  EdfRecording(ParsedHeader parsed, std::shared_ptr<const Source> source);

  std::size_t record_bytes() const;
  std::size_t resolve(std::string_view label) const;

  ParsedHeader parsed_;
  std::shared_ptr<const Source> source_;
};

}  // namespace sleeppe::edf
