// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// JSON scenario files.
//
//   {
//     "version": 1,
//     "alphabets": [["x0", "x1"], ["y0", "y1"]],
//     "joint": [[0.4, 0.1], [0.1, 0.4]],
//     "targets": [[...], [...]]      or "target": [...] when both sides share an alphabet
//     "functions": [[...], [...]]    or "function": [...]
//     "partitions": [[0, 1], [0, 1]] optional; default is the Gacs-Korner blocks
//     "params": {"t": 4, "t_c": 4, "K": 1000, "seed": 7, "label": "run",
//                "n_overrides": {"n_c": 8, "n_ref": [[..], [..]], "naive": [..]},
//                "rejection_cap": 100000, "atol": 0, "group_size": 0},
//     "mode": "naive" | "hierarchical" | "both"
//   }

#pragma once

#include <string>
#include <string_view>

#include "remgen/protocol.hpp"

namespace remgen {

inline constexpr int kScenarioVersion = 1;

/// Parses and validates. Throws InvalidScenario naming the offending field.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);

/// Canonical pretty-printed form; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& sc);

/// Hex fnv1a64 of the canonical compact form.
std::string scenario_fingerprint(const Scenario& sc);

}  // namespace remgen
