#pragma once

#include <string>
#include <vector>

#include "sleeppe/rational.hpp"

namespace sleeppe {

// Uniformly sampled real-valued series in physical units.
struct SampledSignal {
  std::vector<double> samples;
  Rational sample_rate_hz;
  std::string channel_label;

  double rate() const noexcept { return sample_rate_hz.value(); }
  double duration_s() const noexcept { return static_cast<double>(samples.size()) / rate(); }
};

}  // namespace sleeppe
