#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qift {

enum class ErrorCode {
  DivisionByZero,
  PrecisionExhausted,
  SingularMatrix,
  ParseError,
  InvalidBox,
  InvalidArgument,
  NoAdmissibleEta,
  HypothesisViolated,
  MultipleRoot,
  DerivativeVanishes,
  OracleDepthExceeded,
  FiberMismatch,
  NotSameFiber,
  SetupViolated,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoAdmissibleEta: return "NoAdmissibleEta";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::MultipleRoot: return "MultipleRoot";
    case ErrorCode::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorCode::OracleDepthExceeded: return "OracleDepthExceeded";
    case ErrorCode::FiberMismatch: return "FiberMismatch";
    case ErrorCode::NotSameFiber: return "NotSameFiber";
    case ErrorCode::SetupViolated: return "SetupViolated";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::ParseError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace qift
