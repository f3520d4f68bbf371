#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace univdyn {

enum class ErrorCode {
  InvalidIndex,
  NotInjective,
  NormBoundViolated,
  OutOfCoverage,
  InsufficientInput,
  SpaceMismatch,
  InvalidBranch,
  NoCell,
  NotAntichain,
  EmptyFamily,
  LipschitzRefuted,
  NetTooCoarse,
  InsufficientResolution,
  UnknownMember,
  InvalidRelation,
  ResolutionMismatch,
  NotInvariant,
  ModulusTooCoarse,
  ParseError,
  InconsistentOracle,
};

std::string_view error_name(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace univdyn
