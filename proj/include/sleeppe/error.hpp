#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sleeppe {

// Every failure the library reports. The CLI maps each code onto one of
// four coarse categories (see category()).
enum class ErrorCode {
  // edf
  TruncatedHeader,
  NonNumericField,
  UnsupportedVariant,
  InvalidHeader,
  UnknownChannel,
  AmbiguousChannel,
  TruncatedData,
  // hypnogram
  UnknownStageLabel,
  NonMonotoneOnsets,
  MisalignedOnset,
  EmptyHypnogram,
  NoOverlap,
  // dsp
  NonPositiveRate,
  EmptySignal,
  SignalShorterThanKernel,
  InvalidFilter,
  // ordinal
  WrongTupleLength,
  SeriesTooShort,
  InvalidParams,
  NotADistribution,
  // analysis
  ZeroVariance,
  LengthMismatch,
  EmptyInput,
  // io
  FileNotFound,
  IoFailure,
  MalformedInput,
};

enum class ErrorCategory { File, Format, Channel, Param };

std::string_view to_string(ErrorCode code);
std::string_view to_string(ErrorCategory category);
ErrorCategory category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return sleeppe::category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace sleeppe
