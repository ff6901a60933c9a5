#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace potopt {

enum class ErrorCode {
  InvalidDomain,
  InvalidArgument,
  MismatchedGrid,
  NegativePotential,
  SingularSystem,
  NoConvergence,
  ZeroMinimizer,
  DegenerateContactSet,
  SignViolation,
  BracketingFailure,
  AllBelowThreshold,
  UnderResolvedGrid,
  OverlappingSupports,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Exception type thrown by every module; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace potopt
