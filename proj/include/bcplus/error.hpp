#pragma once

#include <stdexcept>
#include <string>

namespace bcplus {

enum class ErrorCode {
  UnknownSort,
  CyclicSortHierarchy,
  UnassignedConstant,
  NonIntegerArithmetic,
  AdditiveHeadMisuse,
  ImpossibleContainsAction,
  ValidationFailed,
  DomainEmpty,
  GroundingBudgetExceeded,
  HorizonNegative,
  SolverBudgetExceeded,
  Cancelled,
  StateSpaceTooLarge,
  MissingFencedBlock,
  TemplateUnbound,
  ClientFailure,
  Io,
  Config,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bcplus
