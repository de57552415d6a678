#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steklov {

enum class ErrorCode {
  NotConnected,
  BoundaryTooSmall,
  BoundaryConditionViolated,
  MultiEdgeOrLoop,
  InvalidInput,
  SingularInteriorBlock,
  EigenSolverFailure,
  ZeroFunction,
  NotOrthogonal,
  DimensionMismatch,
  SupportsOverlap,
  SupportMissesBoundary,
  ExplosionGuard,
  ZeroWeight,
  Infeasible,
  SolverStalled,
  BlockDiameterInfeasible,
  PartitionNotBounded,
  Retry,
  NeighborhoodsOverlap,
  RetriesExhausted,
  PreconditionViolated,
  BadSpec,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::BoundaryTooSmall: return "BoundaryTooSmall";
    case ErrorCode::BoundaryConditionViolated: return "BoundaryConditionViolated";
    case ErrorCode::MultiEdgeOrLoop: return "MultiEdgeOrLoop";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularInteriorBlock: return "SingularInteriorBlock";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SupportsOverlap: return "SupportsOverlap";
    case ErrorCode::SupportMissesBoundary: return "SupportMissesBoundary";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SolverStalled: return "SolverStalled";
    case ErrorCode::BlockDiameterInfeasible: return "BlockDiameterInfeasible";
    case ErrorCode::PartitionNotBounded: return "PartitionNotBounded";
    case ErrorCode::Retry: return "Retry";
    case ErrorCode::NeighborhoodsOverlap: return "NeighborhoodsOverlap";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code; every library failure is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace steklov
