#include "sleeppe/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sleeppe/error.hpp"

namespace sleeppe::dsp {

std::vector<double> hamming_sinc_kernel(double cutoff_hz, double sample_rate_hz, int num_taps) {
  if (num_taps < 1 || num_taps % 2 == 0)
    throw Error(ErrorCode::InvalidFilter, "num_taps must be a positive odd number, got " + std::to_string(num_taps));
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorCode::NonPositiveRate, "sample rate must be positive");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0))
    throw Error(ErrorCode::InvalidFilter, "cutoff " + std::to_string(cutoff_hz) + " Hz must lie in (0, " +
                                              std::to_string(sample_rate_hz / 2.0) + ") Hz");
  using std::numbers::pi;
  const double fc = cutoff_hz / sample_rate_hz;
  const int delay = (num_taps - 1) / 2;
  std::vector<double> h(static_cast<std::size_t>(num_taps));
  double sum = 0.0;
  // Evaluate the first half and mirror it so the taps are exactly symmetric.
  for (int k = 0; k <= delay; ++k) {
    const double t = k - delay;
    const double sinc = k == delay ? 2.0 * fc : std::sin(2.0 * pi * fc * t) / (pi * t);
    const double w = num_taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * pi * k / (num_taps - 1));
    h[static_cast<std::size_t>(k)] = sinc * w;
    h[static_cast<std::size_t>(num_taps - 1 - k)] = sinc * w;
  }
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

SampledSignal resample(const SampledSignal& signal, const Rational& target_hz) {
  if (!signal.sample_rate_hz.positive() || !target_hz.positive())
    throw Error(ErrorCode::NonPositiveRate, "sample rates must be positive");
  if (signal.samples.empty()) throw Error(ErrorCode::EmptySignal, "cannot resample an empty signal");

  const Rational ratio = target_hz / signal.sample_rate_hz;
  const std::int64_t up = ratio.num();
  const std::int64_t down = ratio.den();
  if (up == 1 && down == 1) return signal;
  if (std::max(up, down) > 100000)
    throw Error(ErrorCode::InvalidParams, "resampling ratio " + ratio.to_string() + " is too fine-grained");

  const double f_in = signal.rate();
  const double f_out = target_hz.value();
  const double f_up = f_in * static_cast<double>(up);
  const int taps = static_cast<int>(10 * std::max(up, down) + 1);
  std::vector<double> h = hamming_sinc_kernel(0.9 * std::min(f_in, f_out) / 2.0, f_up, taps);
  for (double& v : h) v *= static_cast<double>(up);

  const auto n = static_cast<std::int64_t>(signal.samples.size());
  const std::int64_t out_len = (n * up + down - 1) / down;
  const std::int64_t delay = (taps - 1) / 2;
  const double* x = signal.samples.data();

  SampledSignal out;
  out.sample_rate_hz = target_hz;
  out.channel_label = signal.channel_label;
  out.samples.resize(static_cast<std::size_t>(out_len));
  for (std::int64_t j = 0; j < out_len; ++j) {
    // Position in the zero-stuffed stream, shifted by the group delay.
    const std::int64_t p = j * down + delay;
    const std::int64_t lo = p - (taps - 1);
    std::int64_t i_first = lo <= 0 ? 0 : (lo + up - 1) / up;
    const std::int64_t i_last = std::min(n - 1, p / up);
    double acc = 0.0;
    for (std::int64_t i = i_first; i <= i_last; ++i) acc += x[i] * h[static_cast<std::size_t>(p - i * up)];
    out.samples[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

SampledSignal lowpass(const SampledSignal& signal, const FilterSpec& spec) {
  if (!signal.sample_rate_hz.positive()) throw Error(ErrorCode::NonPositiveRate, "sample rate must be positive");
  const std::vector<double> h = hamming_sinc_kernel(spec.cutoff_hz, signal.rate(), spec.num_taps);
  const std::size_t n = signal.samples.size();
  const std::size_t taps = h.size();
  if (n < taps)
    throw Error(ErrorCode::SignalShorterThanKernel,
                "signal has " + std::to_string(n) + " samples, kernel " + std::to_string(taps));

  const std::size_t pad = (taps - 1) / 2;
  std::vector<double> padded(n + 2 * pad);
  // Reflect about the end samples without repeating them.
  for (std::size_t i = 0; i < pad; ++i) {
    padded[pad - 1 - i] = signal.samples[i + 1];
    padded[pad + n + i] = signal.samples[n - 2 - i];
  }
  std::copy(signal.samples.begin(), signal.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

  SampledSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.channel_label = signal.channel_label;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xp = padded.data() + i;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc += h[k] * xp[k];
    out.samples[i] = acc;
  }
  return out;
}

std::vector<EpochWindow> window(const SampledSignal& signal, std::size_t epoch_len_samples, double time_origin_s) {
  if (epoch_len_samples == 0) throw Error(ErrorCode::InvalidParams, "epoch length must be at least one sample");
  if (signal.samples.empty()) throw Error(ErrorCode::EmptySignal, "cannot window an empty signal");
  if (!signal.sample_rate_hz.positive()) throw Error(ErrorCode::NonPositiveRate, "sample rate must be positive");

  const std::size_t count = signal.samples.size() / epoch_len_samples;
  const Rational window_s = Rational(static_cast<std::int64_t>(epoch_len_samples)) / signal.sample_rate_hz;
  std::vector<EpochWindow> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto first = signal.samples.begin() + static_cast<std::ptrdiff_t>(i * epoch_len_samples);
    out[i].samples.assign(first, first + static_cast<std::ptrdiff_t>(epoch_len_samples));
    out[i].start_time_s = time_origin_s + static_cast<double>(i) * window_s.value();
    out[i].index = i;
  }
  return out;
}

SampledSignal slice(const SampledSignal& signal, std::size_t first, std::size_t count) {
  SampledSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.channel_label = signal.channel_label;
  first = std::min(first, signal.samples.size());
  count = std::min(count, signal.samples.size() - first);
  out.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(first),
                     signal.samples.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

}  // namespace sleeppe::dsp
