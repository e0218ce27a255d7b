// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return remgen::cli::run_cli(args, std::cout, std::cerr);
}
