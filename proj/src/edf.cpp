#include "sleeppe/edf.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>
#include <utility>

#include "sleeppe/error.hpp"
#include "text_util.hpp"

namespace sleeppe::edf {
namespace {

using detail::trim;

class FieldReader {
 public:
  explicit FieldReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string_view raw(std::size_t offset, std::size_t width) const {
    return {reinterpret_cast<const char*>(bytes_.data()) + offset, width};
  }

  std::string text(std::size_t offset, std::size_t width) const {
    return std::string(trim(raw(offset, width)));
  }

  std::int64_t integer(std::size_t offset, std::size_t width, std::string_view name) const {
    const auto field = trim(raw(offset, width));
    std::int64_t value = 0;
    const auto* end = field.data() + field.size();
    const auto* begin = field.data();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
      throw Error(ErrorCode::NonNumericField,
                  std::string(name) + " is not an integer: '" + std::string(field) + "'");
    return value;
  }

  double real(std::size_t offset, std::size_t width, std::string_view name) const {
    const auto field = trim(raw(offset, width));
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto* begin = field.data();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
      throw Error(ErrorCode::NonNumericField,
                  std::string(name) + " is not a number: '" + std::string(field) + "'");
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
};

// "dd.mm.yy" / "hh.mm.ss"
std::array<int, 3> parse_dotted(std::string_view field, std::string_view name) {
  std::array<int, 3> parts{};
  const auto pieces = detail::split(trim(field), '.');
  if (pieces.size() != 3)
    throw Error(ErrorCode::NonNumericField, std::string(name) + " malformed: '" + std::string(field) + "'");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto p = trim(pieces[i]);
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), parts[i]);
    if (p.empty() || ec != std::errc() || ptr != p.data() + p.size())
      throw Error(ErrorCode::NonNumericField, std::string(name) + " malformed: '" + std::string(field) + "'");
  }
  return parts;
}

void check_positive_int(std::int64_t v, std::int64_t limit, std::string_view name) {
  if (v < 1 || v > limit)
    throw Error(ErrorCode::InvalidHeader, std::string(name) + " out of range: " + std::to_string(v));
}

std::string pad(std::string_view value, std::size_t width) {
  std::string out(value.substr(0, width));
  out.resize(width, ' ');
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string two_digits(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

}  // namespace

ParsedHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes)
    throw Error(ErrorCode::TruncatedHeader,
                "need 256 octets, have " + std::to_string(bytes.size()));

  const FieldReader f(bytes);
  ParsedHeader out;
  EdfHeader& h = out.header;
  h.version = f.text(0, 8);
  h.patient_id = f.text(8, 80);
  h.recording_id = f.text(88, 80);

  const auto date = parse_dotted(f.raw(168, 8), "start date");
  const auto time = parse_dotted(f.raw(176, 8), "start time");
  h.start.day = date[0];
  h.start.month = date[1];
  h.start.year = date[2] >= 85 ? 1900 + date[2] : 2000 + date[2];
  h.start.hour = time[0];
  h.start.minute = time[1];
  h.start.second = time[2];

  h.header_bytes = f.integer(184, 8, "header bytes");
  h.reserved = f.text(192, 44);
  if (h.reserved.starts_with("EDF+D"))
    throw Error(ErrorCode::UnsupportedVariant, "discontinuous EDF+D recordings are not supported");

  h.num_data_records = f.integer(236, 8, "number of data records");
  if (h.num_data_records == -1)
    throw Error(ErrorCode::UnsupportedVariant, "unknown number of data records (-1)");
  check_positive_int(h.num_data_records, INT32_MAX, "number of data records");

  h.record_duration_s = Rational::parse_decimal(trim(f.raw(244, 8)));
  if (!h.record_duration_s.positive())
    throw Error(ErrorCode::InvalidHeader, "record duration must be positive");

  const std::int64_t ns = f.integer(252, 4, "number of signals");
  check_positive_int(ns, 9999, "number of signals");
  h.num_signals = static_cast<int>(ns);

  const auto expected = static_cast<std::int64_t>(kFixedHeaderBytes + kSignalHeaderBytes * ns);
  if (h.header_bytes != expected)
    throw Error(ErrorCode::InvalidHeader, "header bytes " + std::to_string(h.header_bytes) +
                                              " != 256 + 256 * " + std::to_string(ns));
  if (bytes.size() < static_cast<std::size_t>(expected))
    throw Error(ErrorCode::TruncatedHeader, "need " + std::to_string(expected) + " octets, have " +
                                                std::to_string(bytes.size()));

  // Signal fields are stored column-wise: all labels, then all transducers...
  const std::size_t n = static_cast<std::size_t>(ns);
  out.channels.resize(n);
  std::size_t base = kFixedHeaderBytes;
  auto column = [&](std::size_t width, auto&& assign) {
    for (std::size_t i = 0; i < n; ++i) assign(out.channels[i], base + i * width, width);
    base += n * width;
  };
  column(16, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.label = f.text(o, w); });
  column(80, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.transducer = f.text(o, w); });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.physical_dim = f.text(o, w); });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.phys_min = f.real(o, w, "physical minimum"); });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.phys_max = f.real(o, w, "physical maximum"); });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) {
    c.dig_min = static_cast<int>(f.integer(o, w, "digital minimum"));
  });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) {
    c.dig_max = static_cast<int>(f.integer(o, w, "digital maximum"));
  });
  column(80, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.prefiltering = f.text(o, w); });
  column(8, [&](ChannelMeta& c, std::size_t o, std::size_t w) {
    c.samples_per_record = f.integer(o, w, "samples per record");
  });
  column(32, [&](ChannelMeta& c, std::size_t o, std::size_t w) { c.reserved = f.text(o, w); });

  for (const auto& c : out.channels) {
    if (c.dig_min >= c.dig_max)
      throw Error(ErrorCode::InvalidHeader, "channel '" + c.label + "': digital minimum >= maximum");
    if (c.dig_min < -32768 || c.dig_max > 32767)
      throw Error(ErrorCode::InvalidHeader, "channel '" + c.label + "': digital range exceeds 16 bits");
    if (c.phys_min == c.phys_max)
      throw Error(ErrorCode::InvalidHeader, "channel '" + c.label + "': physical minimum == maximum");
    check_positive_int(c.samples_per_record, INT32_MAX, "samples per record");
  }
  return out;
}

std::string serialize_header(const ParsedHeader& parsed) {
  const EdfHeader& h = parsed.header;
  std::string out;
  out.reserve(kFixedHeaderBytes + kSignalHeaderBytes * parsed.channels.size());
  out += pad(h.version, 8);
  out += pad(h.patient_id, 80);
  out += pad(h.recording_id, 80);
  out += two_digits(h.start.day) + "." + two_digits(h.start.month) + "." + two_digits(h.start.year % 100);
  out += two_digits(h.start.hour) + "." + two_digits(h.start.minute) + "." + two_digits(h.start.second);
  out += pad(std::to_string(h.header_bytes), 8);
  out += pad(h.reserved, 44);
  out += pad(std::to_string(h.num_data_records), 8);
  const Rational& d = h.record_duration_s;
  out += pad(d.den() == 1 ? std::to_string(d.num()) : format_real(d.value()), 8);
  out += pad(std::to_string(parsed.channels.size()), 4);

  auto column = [&](std::size_t width, auto&& field) {
    for (const auto& c : parsed.channels) out += pad(field(c), width);
  };
  column(16, [](const ChannelMeta& c) { return c.label; });
  column(80, [](const ChannelMeta& c) { return c.transducer; });
  column(8, [](const ChannelMeta& c) { return c.physical_dim; });
  column(8, [](const ChannelMeta& c) { return format_real(c.phys_min); });
  column(8, [](const ChannelMeta& c) { return format_real(c.phys_max); });
  column(8, [](const ChannelMeta& c) { return std::to_string(c.dig_min); });
  column(8, [](const ChannelMeta& c) { return std::to_string(c.dig_max); });
  column(80, [](const ChannelMeta& c) { return c.prefiltering; });
  column(8, [](const ChannelMeta& c) { return std::to_string(c.samples_per_record); });
  column(32, [](const ChannelMeta& c) { return c.reserved; });
  return out;
}

// Either an in-memory image or a file read on demand.
struct EdfRecording::Source {
  std::vector<std::uint8_t> bytes;
  std::filesystem::path path;
  std::uintmax_t size = 0;
  bool in_memory = false;

  // Reads `count` octets at `offset` into `dst`; false when past end of data.
  bool read(std::uintmax_t offset, std::span<std::uint8_t> dst, std::ifstream* file) const {
    if (offset + dst.size() > size) return false;
    if (in_memory) {
      std::copy_n(bytes.data() + offset, dst.size(), dst.data());
      return true;
    }
    file->seekg(static_cast<std::streamoff>(offset));
    file->read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size()));
    return static_cast<bool>(*file);
  }
};

EdfRecording::EdfRecording(ParsedHeader parsed, std::shared_ptr<const Source> source)
    : parsed_(std::move(parsed)), source_(std::move(source)) {}

EdfRecording EdfRecording::from_bytes(std::vector<std::uint8_t> bytes) {
  auto source = std::make_shared<Source>();
  source->bytes = std::move(bytes);
  source->size = source->bytes.size();
  source->in_memory = true;
  auto parsed = parse_header(source->bytes);
  return EdfRecording(std::move(parsed), std::move(source));
}

EdfRecording EdfRecording::open(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::FileNotFound, "cannot open EDF file " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open EDF file " + path.string());

  std::vector<std::uint8_t> head(kFixedHeaderBytes);
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  if (head.size() == kFixedHeaderBytes) {
    // Peek at the signal count so the full header can be read in one go.
    const FieldReader f(head);
    const auto ns = f.integer(252, 4, "number of signals");
    if (ns >= 1 && ns <= 9999) {
      head.resize(kFixedHeaderBytes + kSignalHeaderBytes * static_cast<std::size_t>(ns));
      in.read(reinterpret_cast<char*>(head.data()) + kFixedHeaderBytes,
              static_cast<std::streamsize>(head.size() - kFixedHeaderBytes));
      head.resize(kFixedHeaderBytes + static_cast<std::size_t>(in.gcount()));
    }
  }
  auto parsed = parse_header(head);

  auto source = std::make_shared<Source>();
  source->path = path;
  source->size = size;
  return EdfRecording(std::move(parsed), std::move(source));
}

std::vector<ChannelInfo> EdfRecording::list_channels() const {
  std::vector<ChannelInfo> out;
  out.reserve(parsed_.channels.size());
  for (const auto& c : parsed_.channels) {
    out.push_back({c.label, Rational(c.samples_per_record) / header().record_duration_s,
                   c.is_annotation()});
  }
  return out;
}

std::size_t EdfRecording::record_bytes() const {
  std::size_t total = 0;
  for (const auto& c : parsed_.channels) total += 2 * static_cast<std::size_t>(c.samples_per_record);
  return total;
}

std::size_t EdfRecording::resolve(std::string_view label) const {
  const auto wanted = trim(label);
  std::size_t found = parsed_.channels.size();
  int matches = 0;
  for (std::size_t i = 0; i < parsed_.channels.size(); ++i) {
    const auto& c = parsed_.channels[i];
    if (c.is_annotation() || c.label != wanted) continue;
    if (matches++ == 0) found = i;
  }
  if (matches == 0) throw Error(ErrorCode::UnknownChannel, "no channel labelled '" + std::string(wanted) + "'");
  if (matches > 1)
    throw Error(ErrorCode::AmbiguousChannel,
                std::to_string(matches) + " channels labelled '" + std::string(wanted) + "'");
  return found;
}

bool EdfRecording::has_channel(std::string_view label) const {
  const auto wanted = trim(label);
  for (const auto& c : parsed_.channels)
    if (!c.is_annotation() && c.label == wanted) return true;
  return false;
}

SampledSignal EdfRecording::read_channel(std::string_view label) const {
  const std::size_t index = resolve(label);
  const ChannelMeta& meta = parsed_.channels[index];

  std::size_t channel_offset = 0;
  for (std::size_t i = 0; i < index; ++i)
    channel_offset += 2 * static_cast<std::size_t>(parsed_.channels[i].samples_per_record);

  const auto spr = static_cast<std::size_t>(meta.samples_per_record);
  const auto records = static_cast<std::size_t>(header().num_data_records);
  const std::size_t stride = record_bytes();
  const std::uintmax_t promised = static_cast<std::uintmax_t>(header().header_bytes) + records * stride;
  if (source_->size < promised)
    throw Error(ErrorCode::TruncatedData, "file holds " + std::to_string(source_->size) + " octets, header promises " +
                                              std::to_string(promised));

  std::ifstream file;
  if (!source_->in_memory) {
    file.open(source_->path, std::ios::binary);
    if (!file) throw Error(ErrorCode::FileNotFound, "cannot reopen " + source_->path.string());
  }

  SampledSignal out;
  out.channel_label = meta.label;
  out.sample_rate_hz = Rational(meta.samples_per_record) / header().record_duration_s;
  out.samples.resize(records * spr);

  std::vector<std::uint8_t> buffer(2 * spr);
  for (std::size_t r = 0; r < records; ++r) {
    const std::uintmax_t offset = static_cast<std::uintmax_t>(header().header_bytes) + r * stride + channel_offset;
    if (!source_->read(offset, buffer, source_->in_memory ? nullptr : &file))
      throw Error(ErrorCode::TruncatedData, "data ends inside record " + std::to_string(r) + " of " +
                                                std::to_string(records));
    double* dst = out.samples.data() + r * spr;
    for (std::size_t s = 0; s < spr; ++s) {
      const auto raw = static_cast<std::uint16_t>(buffer[2 * s] | (buffer[2 * s + 1] << 8));
      dst[s] = meta.to_physical(static_cast<std::int16_t>(raw));
    }
  }
  return out;
}

}  // namespace sleeppe::edf
