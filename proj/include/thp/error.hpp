#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thp {

/// Stable error codes. The CLI prints the name returned by to_string().
enum class ErrorCode {
  PoleOnCircle,
  ZeroOnCircle,
  ZeroGain,
  EvalAtPole,
  NotMatching,
  SymbolNotInvertibleOnCircle,
  NotMatchingFunction,
  SignatureNotUnimodular,
  TruncationTooSmall,
  WrongIndexForSide,
  CaseUnsupported,
  NegativeIndex,
  NotInKernel,
  WrongIndices,
  FactorizationUnavailable,
  CurveThroughOrigin,
  ParseError,
  InvalidConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleOnCircle: return "PoleOnCircle";
    case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorCode::ZeroGain: return "ZeroGain";
    case ErrorCode::EvalAtPole: return "EvalAtPole";
    case ErrorCode::NotMatching: return "NotMatching";
    case ErrorCode::SymbolNotInvertibleOnCircle: return "SymbolNotInvertibleOnCircle";
    case ErrorCode::NotMatchingFunction: return "NotMatchingFunction";
    case ErrorCode::SignatureNotUnimodular: return "SignatureNotUnimodular";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::WrongIndexForSide: return "WrongIndexForSide";
    case ErrorCode::CaseUnsupported: return "CaseUnsupported";
    case ErrorCode::NegativeIndex: return "NegativeIndex";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::WrongIndices: return "WrongIndices";
    case ErrorCode::FactorizationUnavailable: return "FactorizationUnavailable";
    case ErrorCode::CurveThroughOrigin: return "CurveThroughOrigin";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace thp
