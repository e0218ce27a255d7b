// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/error.hpp"

namespace remgen {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::DegenerateWeights: return "DegenerateWeights";
    case ErrorKind::ZeroBlockMass: return "ZeroBlockMass";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::RejectionCapExceeded: return "RejectionCapExceeded";
    case ErrorKind::InfeasibleEnumeration: return "InfeasibleEnumeration";
    case ErrorKind::BlockTargetMismatch: return "BlockTargetMismatch";
    case ErrorKind::MismatchedScenario: return "MismatchedScenario";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace remgen
