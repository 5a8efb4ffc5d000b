#include "sleeppe/synth.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "sleeppe/error.hpp"
#include "sleeppe/report.hpp"

namespace sleeppe::synth {

std::vector<double> ramp(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(i);
  return out;
}

std::vector<double> sine(std::size_t n, double freq_hz, double rate_hz, double amplitude) {
  if (!(rate_hz > 0.0)) throw Error(ErrorCode::NonPositiveRate, "rate must be positive");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate_hz);
  return out;
}

std::vector<double> uniform_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

std::string to_text(const std::vector<double>& values) {
  std::string out;
  out.reserve(values.size() * 8);
  for (double v : values) {
    out += report::format_number(v);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_values(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  std::size_t line = 1;
  const auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';'; };
  while (i < text.size()) {
    if (is_sep(text[i])) {
      line += text[i] == '\n';
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    const std::string_view token = text.substr(i, j - i);
    const char* begin = token.data();
    if (!token.empty() && *begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line) + ": not a number '" +
                                                 std::string(token) + "'");
    out.push_back(v);
    i = j;
  }
  return out;
}

}  // namespace sleeppe::synth
