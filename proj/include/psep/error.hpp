#pragma once

#include <stdexcept>
#include <string>

namespace psep {

enum class Errc {
  InconsistentRotation,
  NotConnected,
  EulerViolation,
  NegativeWeight,
  UnknownRoot,
  NotSpanningTree,
  EdgeInTree,
  EdgeNotInCotree,
  NotProper,
  DegenerateTotal,
  NotBiconnected,
  BitBudgetExceeded,
  RoundLimitExceeded,
  InvalidPartition,
  OperatorOverflow,
  ConflictingRoot,
  InsufficientData,
  BadParams,
  ParseError,
  InvariantViolation,
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InconsistentRotation: return "InconsistentRotation";
    case Errc::NotConnected: return "NotConnected";
    case Errc::EulerViolation: return "EulerViolation";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::UnknownRoot: return "UnknownRoot";
    case Errc::NotSpanningTree: return "NotSpanningTree";
    case Errc::EdgeInTree: return "EdgeInTree";
    case Errc::EdgeNotInCotree: return "EdgeNotInCotree";
    case Errc::NotProper: return "NotProper";
    case Errc::DegenerateTotal: return "DegenerateTotal";
    case Errc::NotBiconnected: return "NotBiconnected";
    case Errc::BitBudgetExceeded: return "BitBudgetExceeded";
    case Errc::RoundLimitExceeded: return "RoundLimitExceeded";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::OperatorOverflow: return "OperatorOverflow";
    case Errc::ConflictingRoot: return "ConflictingRoot";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::BadParams: return "BadParams";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace psep
