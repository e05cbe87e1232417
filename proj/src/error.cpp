#include "qidx/error.hpp"

namespace qidx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ExponentOverflow: return "ExponentOverflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotInvertibleOnTorus: return "NotInvertibleOnTorus";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RootOnCircle: return "RootOnCircle";
    case ErrorCode::PhaseStepTooLarge: return "PhaseStepTooLarge";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::UnwrapClosureFailure: return "UnwrapClosureFailure";
    case ErrorCode::NonIntegerTrace: return "NonIntegerTrace";
    case ErrorCode::Unclassifiable: return "Unclassifiable";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::AmbiguousRank: return "AmbiguousRank";
    case ErrorCode::SeriesDivergence: return "SeriesDivergence";
    case ErrorCode::ThetaNotIrrational: return "ThetaNotIrrational";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimError: return "DimError";
    case ErrorCode::DuplicateExponent: return "DuplicateExponent";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DimError:
    case ErrorCode::DuplicateExponent:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::ThetaNotIrrational:
      return true;
    default:
      return false;
  }
}

}  // namespace qidx
