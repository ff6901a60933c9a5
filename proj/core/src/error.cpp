#include "potopt/error.hpp"

namespace potopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedGrid: return "MismatchedGrid";
    case ErrorCode::NegativePotential: return "NegativePotential";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroMinimizer: return "ZeroMinimizer";
    case ErrorCode::DegenerateContactSet: return "DegenerateContactSet";
    case ErrorCode::SignViolation: return "SignViolation";
    case ErrorCode::BracketingFailure: return "BracketingFailure";
    case ErrorCode::AllBelowThreshold: return "AllBelowThreshold";
    case ErrorCode::UnderResolvedGrid: return "UnderResolvedGrid";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace potopt
