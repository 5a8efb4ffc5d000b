#include "sleeppe/error.hpp"

namespace sleeppe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TruncatedHeader: return "TruncatedHeader";
    case ErrorCode::NonNumericField: return "NonNumericField";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::InvalidHeader: return "InvalidHeader";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::AmbiguousChannel: return "AmbiguousChannel";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::UnknownStageLabel: return "UnknownStageLabel";
    case ErrorCode::NonMonotoneOnsets: return "NonMonotoneOnsets";
    case ErrorCode::MisalignedOnset: return "MisalignedOnset";
    case ErrorCode::EmptyHypnogram: return "EmptyHypnogram";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::SignalShorterThanKernel: return "SignalShorterThanKernel";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::WrongTupleLength: return "WrongTupleLength";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::File: return "file";
    case ErrorCategory::Format: return "format";
    case ErrorCategory::Channel: return "channel";
    case ErrorCategory::Param: return "param";
  }
  return "param";
}

ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound:
    case ErrorCode::IoFailure:
      return ErrorCategory::File;
    case ErrorCode::UnknownChannel:
    case ErrorCode::AmbiguousChannel:
      return ErrorCategory::Channel;
    case ErrorCode::TruncatedHeader:
    case ErrorCode::NonNumericField:
    case ErrorCode::UnsupportedVariant:
    case ErrorCode::InvalidHeader:
    case ErrorCode::TruncatedData:
    case ErrorCode::UnknownStageLabel:
    case ErrorCode::NonMonotoneOnsets:
    case ErrorCode::MisalignedOnset:
    case ErrorCode::EmptyHypnogram:
    case ErrorCode::MalformedInput:
      return ErrorCategory::Format;
    default:
      return ErrorCategory::Param;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace sleeppe
