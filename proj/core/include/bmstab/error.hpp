#pragma once

#include <stdexcept>
#include <string>

namespace bmstab {

enum class ErrorCode {
  LatticeMismatch,
  EmptyOperand,
  InvalidT,
  ScaleMismatch,
  HypothesisNotSatisfied,
  IntervalMissesSup,
  EmptyIntersection,
  WindowEmpty,
  FreimanInapplicable,
  BoundViolated,
  OutOfBand,
  Degenerate,
  DegenerateInput,
  DegenerateMoments,
  EmptyAfterTruncation,
  OmegaEmpty,
  EmptySet,
  DeficitTooLarge,
  NumericalError,
  InvalidSpec,
  InvalidArgument,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the recovery pipeline; `stage` names the step that failed, e.g.
// "pass1/select_level_intervals".
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorCode code, const std::string& message);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace bmstab
