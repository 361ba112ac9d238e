#pragma once

#include <stdexcept>
#include <string>

namespace symscan {

// Location of a token or statement in the model source text.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
  bool operator==(const SourceSpan&) const = default;
};

enum class ErrorCode {
  SyntaxError,
  DuplicateDeclaration,
  UndeclaredVariable,
  ArityMismatch,
  UnknownFactorKind,
  BadIndex,
  MissingRangeSize,
  CaseSplitBudgetExceeded,
  InvalidSymmetryShape,
  DegenerateDraw,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownFactorKind: return "UnknownFactorKind";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::MissingRangeSize: return "MissingRangeSize";
    case ErrorCode::CaseSplitBudgetExceeded: return "CaseSplitBudgetExceeded";
    case ErrorCode::InvalidSymmetryShape: return "InvalidSymmetryShape";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

// Every user-facing failure carries the source span it refers to.
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorCode code, SourceSpan span, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + " at " +
                           span.str() + ": " + message),
        code_(code),
        span_(span),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  SourceSpan span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  SourceSpan span_;
  std::string detail_;
};

}  // namespace symscan
