#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cknlab {

/// Failure categories raised by the library. The names double as the
/// user-facing error tags printed by the command-line tool.
enum class Errc {
  DimensionTooSmall,
  DegenerateWeight,
  InvalidExponent,
  InadmissibleWeights,
  NotCritical,
  DerivativeUndefinedAtOrigin,
  NotInSerrinSupercriticalRange,
  NonpositiveRadius,
  InvalidConfig,
  BracketInvalid,
  NonpositiveNode,
  NotInRange,
  RangeExceeded,
  NonpositiveSolution,
  BalanceViolated,
  NonintegrableProfile,
  SymmetryBreakingRegion,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::DegenerateWeight: return "DegenerateWeight";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::InadmissibleWeights: return "InadmissibleWeights";
    case Errc::NotCritical: return "NotCritical";
    case Errc::DerivativeUndefinedAtOrigin: return "DerivativeUndefinedAtOrigin";
    case Errc::NotInSerrinSupercriticalRange: return "NotInSerrinSupercriticalRange";
    case Errc::NonpositiveRadius: return "NonpositiveRadius";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::BracketInvalid: return "BracketInvalid";
    case Errc::NonpositiveNode: return "NonpositiveNode";
    case Errc::NotInRange: return "NotInRange";
    case Errc::RangeExceeded: return "RangeExceeded";
    case Errc::NonpositiveSolution: return "NonpositiveSolution";
    case Errc::BalanceViolated: return "BalanceViolated";
    case Errc::NonintegrableProfile: return "NonintegrableProfile";
    case Errc::SymmetryBreakingRegion: return "SymmetryBreakingRegion";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cknlab
