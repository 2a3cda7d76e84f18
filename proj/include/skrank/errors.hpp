#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skrank {

enum class ErrorCode {
  DuplicateEventId,
  EmptyAlternatives,
  NonPositiveProbability,
  ProbabilitySumViolation,
  DuplicateLabelInEvent,
  IndexOutOfRange,
  LengthMismatch,
  PositionPinned,
  RestrictionConflict,
  NoSecondBest,
  InvalidK,
  CapExceeded,
  InvalidParams,
  SyntaxError,
  EmptyLog,
  RankOutOfRange,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEventId: return "DuplicateEventId";
    case ErrorCode::EmptyAlternatives: return "EmptyAlternatives";
    case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::ProbabilitySumViolation: return "ProbabilitySumViolation";
    case ErrorCode::DuplicateLabelInEvent: return "DuplicateLabelInEvent";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PositionPinned: return "PositionPinned";
    case ErrorCode::RestrictionConflict: return "RestrictionConflict";
    case ErrorCode::NoSecondBest: return "NoSecondBest";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

/// Exception type used across the library. Carries a machine-checkable
/// code next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace skrank
