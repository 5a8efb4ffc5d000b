#pragma once

// Test-only EDF writer. Produces files byte-compatible with the reader's
// expectations so tests can exercise the full parse path without fixtures.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace sleeppe::testing {

struct ChannelSpec {
  std::string label;
  double phys_min = -250.0;
  double phys_max = 250.0;
  int dig_min = -2048;
  int dig_max = 2047;
  int samples_per_record = 1;
  std::string physical_dim = "uV";
  std::vector<std::int16_t> digital;  // num_records * samples_per_record values
};

struct EdfSpec {
  std::string version = "0";
  std::string patient = "X X X X";
  std::string recording = "Startdate X X X X";
  std::string start_date = "01.02.03";
  std::string start_time = "22.00.00";
  std::string reserved;
  std::string num_records_field;  // overrides the computed value when set
  std::string duration = "1";
  int num_records = 1;
  std::vector<ChannelSpec> channels;
};

inline std::string field(const std::string& v, std::size_t w) {
  std::string s = v.substr(0, w);
  s.resize(w, ' ');
  return s;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::vector<std::uint8_t> build_edf(const EdfSpec& spec, bool include_data = true) {
  const std::size_t ns = spec.channels.size();
  std::string h;
  h += field(spec.version, 8);
  h += field(spec.patient, 80);
  h += field(spec.recording, 80);
  h += field(spec.start_date, 8);
  h += field(spec.start_time, 8);
  h += field(std::to_string(256 + 256 * ns), 8);
  h += field(spec.reserved, 44);
  h += field(spec.num_records_field.empty() ? std::to_string(spec.num_records) : spec.num_records_field, 8);
  h += field(spec.duration, 8);
  h += field(std::to_string(ns), 4);
  for (const auto& c : spec.channels) h += field(c.label, 16);
  for (std::size_t i = 0; i < ns; ++i) h += field("AgAgCl electrode", 80);
  for (const auto& c : spec.channels) h += field(c.physical_dim, 8);
  for (const auto& c : spec.channels) h += field(num(c.phys_min), 8);
  for (const auto& c : spec.channels) h += field(num(c.phys_max), 8);
  for (const auto& c : spec.channels) h += field(std::to_string(c.dig_min), 8);
  for (const auto& c : spec.channels) h += field(std::to_string(c.dig_max), 8);
  for (std::size_t i = 0; i < ns; ++i) h += field("HP:0.1Hz LP:75Hz", 80);
  for (const auto& c : spec.channels) h += field(std::to_string(c.samples_per_record), 8);
  for (std::size_t i = 0; i < ns; ++i) h += field("", 32);

  std::vector<std::uint8_t> out(h.begin(), h.end());
  if (!include_data) return out;
  for (int r = 0; r < spec.num_records; ++r) {
    for (const auto& c : spec.channels) {
      for (int s = 0; s < c.samples_per_record; ++s) {
        const std::size_t idx = static_cast<std::size_t>(r) * static_cast<std::size_t>(c.samples_per_record) +
                                static_cast<std::size_t>(s);
        const std::int16_t d = idx < c.digital.size() ? c.digital[idx] : 0;
        const auto u = static_cast<std::uint16_t>(d);
        out.push_back(static_cast<std::uint8_t>(u & 0xff));
        out.push_back(static_cast<std::uint8_t>(u >> 8));
      }
    }
  }
  return out;
}

// Quantizes a physical-unit series onto the channel's digital grid.
inline std::vector<std::int16_t> quantize(const std::vector<double>& physical, const ChannelSpec& c) {
  std::vector<std::int16_t> out;
  out.reserve(physical.size());
  for (double p : physical) {
    double d = (p - c.phys_min) * (c.dig_max - c.dig_min) / (c.phys_max - c.phys_min) + c.dig_min;
    d = std::round(std::fmin(std::fmax(d, c.dig_min), c.dig_max));
    out.push_back(static_cast<std::int16_t>(d));
  }
  return out;
}

}  // namespace sleeppe::testing
