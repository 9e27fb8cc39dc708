#include "bmstab/error.hpp"

#include <utility>

namespace bmstab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LatticeMismatch: return "LatticeMismatch";
    case ErrorCode::EmptyOperand: return "EmptyOperand";
    case ErrorCode::InvalidT: return "InvalidT";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::HypothesisNotSatisfied: return "HypothesisNotSatisfied";
    case ErrorCode::IntervalMissesSup: return "IntervalMissesSup";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::FreimanInapplicable: return "FreimanInapplicable";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::OutOfBand: return "OutOfBand";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DegenerateMoments: return "DegenerateMoments";
    case ErrorCode::EmptyAfterTruncation: return "EmptyAfterTruncation";
    case ErrorCode::OmegaEmpty: return "OmegaEmpty";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DeficitTooLarge: return "DeficitTooLarge";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

StageError::StageError(std::string stage, ErrorCode code, const std::string& message)
    : Error(code, stage + ": " + message), stage_(std::move(stage)) {}

}  // namespace bmstab
