#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opclass {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  DimensionMismatch,
  EmptySubspace,
  InvalidArgument,
  InvalidPencil,
  OracleDisagreement,
  HypothesisViolated,
  NonCommutingProjection,
  RankAmbiguous,
  PostconditionFailed,
  NotNilpotentIndex2,
  ZeroOperator,
  InvalidRRForm,
  InvalidIndex,
  NonCoprime,
  ParseError,
  DimensionError,
  InvalidSpec,
  UnknownTheorem,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySubspace: return "EmptySubspace";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPencil: return "InvalidPencil";
    case ErrorCode::OracleDisagreement: return "OracleDisagreement";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NonCommutingProjection: return "NonCommutingProjection";
    case ErrorCode::RankAmbiguous: return "RankAmbiguous";
    case ErrorCode::PostconditionFailed: return "PostconditionFailed";
    case ErrorCode::NotNilpotentIndex2: return "NotNilpotentIndex2";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::InvalidRRForm: return "InvalidRRForm";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::NonCoprime: return "NonCoprime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnknownTheorem: return "UnknownTheorem";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message holds the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace opclass
