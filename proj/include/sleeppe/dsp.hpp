#pragma once

#include <cstddef>
#include <vector>

#include "sleeppe/rational.hpp"
#include "sleeppe/signal.hpp"

namespace sleeppe::dsp {

enum class WindowKind { Hamming };

// Linear-phase FIR low-pass design. num_taps must be odd so the group delay
// (num_taps - 1) / 2 is a whole number of samples.
struct FilterSpec {
  double cutoff_hz = 30.0;
  int num_taps = 201;
  WindowKind window = WindowKind::Hamming;
};

// Hamming-windowed sinc, normalized to unit DC gain:
//   D = (N - 1) / 2, fc = cutoff_hz / sample_rate_hz
//   g[k] = 2 fc                          for k == D
//        = sin(2 pi fc (k - D)) / (pi (k - D))  otherwise
//   w[k] = 0.54 - 0.46 cos(2 pi k / (N - 1))      (w = 1 when N == 1)
//   h[k] = g[k] w[k] / sum_j g[j] w[j]
std::vector<double> hamming_sinc_kernel(double cutoff_hz, double sample_rate_hz, int num_taps);

// Polyphase rational resampler. With target / source = L / M in lowest terms,
// the signal is zero-stuffed by L, filtered with a Hamming-windowed sinc of
// 10 max(L, M) + 1 taps and cutoff 0.9 min(f_in, f_out) / 2, and decimated by
// M. Output sample j sits at input time j / f_out; length is ceil(n L / M).
// L == M == 1 returns the input unchanged.
SampledSignal resample(const SampledSignal& signal, const Rational& target_hz);

// Zero-phase FIR low-pass: reflect-pad by the group delay on both ends, then
// convolve with the symmetric kernel. Output length equals input length.
SampledSignal lowpass(const SampledSignal& signal, const FilterSpec& spec = {});

struct EpochWindow {
  std::vector<double> samples;
  double start_time_s = 0.0;
  std::size_t index = 0;
};

// Consecutive non-overlapping windows of epoch_len_samples; a trailing partial
// window is dropped. Window i starts at time_origin_s + i * W / rate.
std::vector<EpochWindow> window(const SampledSignal& signal, std::size_t epoch_len_samples,
                                double time_origin_s = 0.0);

// Copies samples [first, first + count), clamped to the signal length.
SampledSignal slice(const SampledSignal& signal, std::size_t first, std::size_t count);

}  // namespace sleeppe::dsp
