// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// The `remgen` command line front end, as a library so tests can drive it
// in-process.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "remgen/error.hpp"

namespace remgen::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 2,
  kInfeasible = 3,
  kSamplingFault = 4,
  kCheckFailed = 5,
};

int exit_code_for(ErrorKind kind) noexcept;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace remgen::cli
