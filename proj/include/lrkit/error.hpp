#pragma once

#include <stdexcept>
#include <string>

namespace lrkit {

enum class ErrorCode {
  InvalidInput,
  NotAKnot,
  NotNested,
  NoSplit,
  FixpointFailure,
  Inconsistency,
  OutOfDomain,
  MalformedMesh,
  Parse,
  Validation,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Every failure path in lrkit throws this type; the
/// code lets callers (and the CLI exit-status mapping) distinguish kinds.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::NotAKnot: return "not a knot";
    case ErrorCode::NotNested: return "not nested";
    case ErrorCode::NoSplit: return "no split";
    case ErrorCode::FixpointFailure: return "fixpoint failure";
    case ErrorCode::Inconsistency: return "inconsistency";
    case ErrorCode::OutOfDomain: return "out of domain";
    case ErrorCode::MalformedMesh: return "malformed mesh";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Validation: return "validation error";
  }
  return "error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

// Overload for literals so hot paths do not build a string per call.
inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace lrkit
