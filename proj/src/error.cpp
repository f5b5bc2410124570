#include "circlelab/error.hpp"

namespace circlelab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingPrime: return "MissingPrime";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::TableTooSmall: return "TableTooSmall";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidModulus: return "InvalidModulus";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::DisjointnessViolation: return "DisjointnessViolation";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::IllegalContour: return "IllegalContour";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::CoprimalityViolation: return "CoprimalityViolation";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::ThetaTooLarge: return "ThetaTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CorruptCache: return "CorruptCache";
  }
  return "Unknown";
}

}  // namespace circlelab
