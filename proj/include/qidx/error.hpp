#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qidx {

enum class ErrorCode {
  DimMismatch,
  ExponentOverflow,
  InvalidArgument,
  NotInvertibleOnTorus,
  NoConvergence,
  RootOnCircle,
  PhaseStepTooLarge,
  ResidualTooLarge,
  UnwrapClosureFailure,
  NonIntegerTrace,
  Unclassifiable,
  LengthMismatch,
  SizeLimit,
  AmbiguousRank,
  SeriesDivergence,
  ThetaNotIrrational,
  ParseError,
  DimError,
  DuplicateExponent,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Usage-level failures (bad input text, files) as opposed to mathematical ones.
bool is_usage_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace qidx
