#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sleeppe::synth {

// 0, 1, 2, ..., n - 1
std::vector<double> ramp(std::size_t n);

// sin(2 pi freq_hz i / rate_hz), i = 0..n-1
std::vector<double> sine(std::size_t n, double freq_hz, double rate_hz, double amplitude = 1.0);

// Uniform on [0, 1): mt19937_64 seeded with `seed`, each draw mapped as
// (draw >> 11) * 2^-53. Bit-identical across platforms.
std::vector<double> uniform_noise(std::size_t n, std::uint64_t seed);

// One value per line, shortest round-trip decimal.
std::string to_text(const std::vector<double>& values);

// Numbers separated by commas, whitespace or newlines. Throws MalformedInput.
std::vector<double> parse_values(std::string_view text);

}  // namespace sleeppe::synth
