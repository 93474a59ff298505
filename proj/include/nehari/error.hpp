#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nehari {

enum class ErrorCode {
  InvalidGrid,
  InvalidExponent,
  InvalidOrder,
  WeightSignViolation,
  ZeroParameters,
  SampleLengthMismatch,
  GridMismatch,
  NonpositiveEpsilon,
  NonpositiveT,
  NonpositiveNorm,
  NonpositiveK,
  NoBracket,
  EmptyCandidateSet,
  NonpositiveS,
  NonpositiveBSup,
  NonpositiveLambda,
  DirectionSearchFailed,
  NoAdmissibleDirection,
  NotConverged,
  NotConvergedInput,
  AllMasked,
  CandidateNotIncluded,
  ConfigParseError,
  InvalidOptions,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. Carries a
/// machine-readable code so front-ends can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

/// Raised by parameter validation with the full list of violated
/// assumptions, not just the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  bool has(ErrorCode code) const noexcept;

 private:
  std::vector<Violation> violations_;
};

}  // namespace nehari
