// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace remgen {

enum class ErrorKind {
  InvalidArgument,
  InvalidDistribution,
  SupportViolation,
  DegenerateWeights,
  ZeroBlockMass,
  IndexOutOfRange,
  RejectionCapExceeded,
  InfeasibleEnumeration,
  BlockTargetMismatch,
  MismatchedScenario,
  InvalidScenario,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind is stable and is what
/// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace remgen
